#
# For licensing see accompanying LICENSE file.
#
PACKAGE_NAME = "heffter_loops"
CONFIG_MODULE = f"{PACKAGE_NAME}.configs.cli"
FIXTURES_DIR = "fixtures"

# canonical element order used by every table read or written
ORDER_STRING = "0,1..n,-n..-1"
# rendering of undefined loop cells and empty array cells
EMPTY_TEXT = "."

DEFAULT_BUDGET = 10**8
DEFAULT_POLY_CAP = 6
DEFAULT_AUT_CAP = 9
DEFAULT_ISO_CAP = 8
# upper bound on permuted naturals emitted per block by theorem_construct
DEFAULT_THEOREM_POLY_CAP = 1000

# exit codes of the command line front end
EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3
