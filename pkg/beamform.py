#!/usr/bin/env python3
"""Robust beamforming CLI - main entry point for all commands."""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli.commands import main


if __name__ == '__main__':
    main()
