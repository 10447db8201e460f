#!/usr/bin/python

import json
import sys

__all__ = ['CQOutWriteJSON', 'toJSON']


def toJSON(data):
    """Serialise to the fixed JSON layout used by every report (2-space indent, trailing newline)."""
    return json.dumps(data, indent=2, allow_nan=False) + '\n'


def CQOutWriteJSON(data, outf):
    """
    CQOutWriteJSON


    Description: Writes a JSON-serialisable object to a file given by the user,
    or to stdout when outf is None or '-'. Key order is kept as given so that
    repeated runs produce byte-identical files.


    Mandatory input:      data, outf

    Output:               JSON file


    usage: CQOutWriteJSON(report, 'report.json')
    """

    text = toJSON(data)
    if outf is None or outf == '-':
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(outf, 'w', encoding='utf-8', newline='\n') as fh:
            fh.write(text)
    return
