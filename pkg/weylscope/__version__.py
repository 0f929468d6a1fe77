# Store the version of the package
__version__ = "2026.10.18"
