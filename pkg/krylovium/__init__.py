from .gf import *
from .matf import *
from .poly import *
from .polmat import *
from .orderbasis import *
from .lifting import *
from .krylov import *
from .spectral import *


# Infer package version number from metadata, via setuptools scm
from importlib.metadata import version, PackageNotFoundError
try:
    __version__ = version("krylovium")
except PackageNotFoundError:
    __version__ = "unknown version"
