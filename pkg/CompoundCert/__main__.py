"""
CompoundCert.__main__
~~~~~~~~~~~~

This module runs the command line with `python -m CompoundCert`.
"""

# Import the required modules
from CompoundCert.CLI import main

if __name__ == "__main__":
    main()
