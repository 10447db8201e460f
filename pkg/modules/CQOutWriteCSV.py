#!/usr/bin/python

import sys

import pandas as pd


def CQOutWriteCSV(padain, outf):
    """
    CQOutWriteCSV


    Description: This task reads in a pandas dataframe and writes out a CSV
    file by a name given by the user, or to stdout when outf is None or '-'.


    Mandatory input:      dataframe, name of output file

    Output:               CSV file


    usage: CQOutWriteCSV(summary.toFrame(), 'summary.csv')
    """

    if outf is None or outf == '-':
        padain.to_csv(path_or_buf=sys.stdout, index=False, lineterminator='\n')
    else:
        padain.to_csv(path_or_buf=outf, index=False, lineterminator='\n')
    return
