#!/usr/bin/env python3
"""Reads an SMT-LIB v2 script on stdin and runs it through the cvc5 Python API.

Used when no cvc5 executable is installed. Arguments of the form
--name=value (or --name) are forwarded as solver options.
"""
import sys

import cvc5


def main():
    tm = cvc5.TermManager()
    solver = cvc5.Solver(tm)
    for arg in sys.argv[1:]:
        if not arg.startswith("--"):
            continue
        name, _, value = arg[2:].partition("=")
        solver.setOption(name, value or "true")
    symbols = cvc5.SymbolManager(tm)
    parser = cvc5.InputParser(solver, symbols)
    parser.setStringInput(cvc5.InputLanguage.SMT_LIB_2_6, sys.stdin.read(), "stdin")
    try:
        while True:
            cmd = parser.nextCommand()
            if cmd.isNull():
                break
            sys.stdout.write(cmd.invoke(solver, symbols))
            sys.stdout.flush()
    except Exception as e:  # parse or solver errors
        msg = str(e).replace('"', "'")
        sys.stdout.write(f'(error "{msg}")\n')
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
