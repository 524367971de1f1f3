"""relkit: finite relations, regular fibrations, equipments and their completions."""

__version__ = "0.1.0"
