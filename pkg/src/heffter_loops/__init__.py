#
# For licensing see accompanying LICENSE file.
#
from importlib.metadata import PackageNotFoundError, version  # pragma: no cover

from beartype.claw import beartype_this_package

try:
    dist_name = "heffter-loops"
    __version__ = version(dist_name)
except PackageNotFoundError:  # pragma: no cover
    __version__ = "unknown"
finally:
    del version, PackageNotFoundError

beartype_this_package()
