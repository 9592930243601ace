#
# For licensing see accompanying LICENSE file.
#
