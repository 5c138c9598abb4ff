"""Select the n-gram statistics kernel at import: compiled if built, else pure."""

try:
    from . import _stats_fast as kernel

    BACKEND = "compiled"
except ImportError:  # extension not built on this host
    from . import _stats_py as kernel

    BACKEND = "pure-python"

pair_stats = kernel.pair_stats
