"""Discriminative sub-trajectory mining with family-wise error rate control.

The heavy lifting lives in the compiled ``_sdsm`` extension; this package
re-exports its public surface.
"""

try:
    from ._sdsm import (  # noqa: F401
        Dataset,
        avg_top_k_max,
        calibrate_epsilon,
        fisher_two_sided_p,
        generate,
        load_dataset,
        mine,
        oracle_mine,
        p_lower_bound,
    )
except ImportError:  # in-tree builds keep the extension next to the package
    from _sdsm import (  # noqa: F401
        Dataset,
        avg_top_k_max,
        calibrate_epsilon,
        fisher_two_sided_p,
        generate,
        load_dataset,
        mine,
        oracle_mine,
        p_lower_bound,
    )

__all__ = [
    "Dataset",
    "avg_top_k_max",
    "calibrate_epsilon",
    "fisher_two_sided_p",
    "generate",
    "load_dataset",
    "mine",
    "oracle_mine",
    "p_lower_bound",
]
