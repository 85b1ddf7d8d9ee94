#!/usr/bin/env python3

from deskvln.cli import main

main()
