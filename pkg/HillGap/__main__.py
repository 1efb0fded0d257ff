"""
:Date: 18.02.2026

..	versionadded:: v0.1.0
"""

import sys

from HillGap.HGCLI import main

if __name__ == "__main__":
	sys.exit(main())
