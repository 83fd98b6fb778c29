from .version import version as __version__
