"""
This module allows the package to be run as a script.

e.g. python -m anideal
"""

from anideal.cli import main

if __name__ == "__main__":
    main()
