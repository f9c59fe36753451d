"""Contains the version information for hhgeom."""
# major, minor, patch
version_info = 0, 1, 0

# Nice string for the version
__version__ = ".".join(map(str, version_info))
