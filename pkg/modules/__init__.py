from .CQErrors import *
from .CQColourSpace import *
from .CQReadImage import *
from .CQQuantize import *
from .CQPaletteDistance import *
from .CQMonkScale import *
from .CQSymbolMatch import *
from .CQForensics import *
