"""latmaj - majorisation des plans en treillis équilibrés"""

__version__ = "0.1.0"
