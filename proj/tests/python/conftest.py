import os
import sys

# In-tree runs: the compiled _fgl sits in the build directory and the fgl
# package wrapper in python/. Both come in through the environment so the
# same tests also pass against an installed wheel.
for var in ("FGL_MODULE_DIR", "FGL_PACKAGE_DIR"):
    path = os.environ.get(var)
    if path and path not in sys.path:
        sys.path.insert(0, path)
