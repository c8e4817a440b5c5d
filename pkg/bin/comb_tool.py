#!/usr/bin/env python3

import logging
import sys

from comb_resources.cli import main

logging.basicConfig()


if __name__ == '__main__':
    sys.exit(main.main(sys.argv[1:]))
