"""Spectral and canonical toolkit for a string with end masses and springs.

Thin re-export of the compiled module. Installed wheels carry _mustring
inside this package; in a build tree the extension sits next to the build
outputs and is picked up from sys.path instead.
"""

import importlib

try:
    _core = importlib.import_module("._mustring", __name__)
except ImportError:
    _core = importlib.import_module("_mustring")

globals().update(
    {name: obj for name, obj in vars(_core).items() if not name.startswith("_")}
)
__version__ = _core.__version__
__doc__ = _core.__doc__
