#!/usr/bin/env python
from setuptools import setup, find_packages

if __name__ == "__main__":
    setup(name='colourquantpp',
          version='0.1.0',
          description='Colour quantisation of images for human-in-the-loop coding.',
          packages=find_packages(exclude=['examples', 'examples.*']),
          py_modules=['colourQuantPP'],
          package_data={'modules': ['data/monk_scale.txt']},
          install_requires=['numpy', 'pandas>=1.5', 'scipy', 'Pillow', 'matplotlib'],
          tests_require=['pytest', 'pytest-cov'],
          entry_points={'console_scripts': ['colourQuantPP=colourQuantPP:main']},
          license='MIT',
          )
