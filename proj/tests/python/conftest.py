import os
import sys

# Under ctest, import the build-tree module even if an editable install exists.
_build_dir = os.environ.get("NOETHER_PYTHON_DIR")
if _build_dir:
    sys.meta_path[:] = [f for f in sys.meta_path if type(f).__name__ != "ScikitBuildRedirectingFinder"]
    sys.path.insert(0, _build_dir)
