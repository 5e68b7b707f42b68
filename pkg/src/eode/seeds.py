"""Sub-seed derivation: each pipeline component gets ``master + fixed offset``."""

OFFSETS = {
    "split": 1_000,
    "preselect": 2_000,
    "fs_folds": 3_000,
    "gwo_fs": 4_000,
    "ensemble_folds": 5_000,
    "kmeans": 6_000,
    "gwo_ensemble": 7_000,
    "classifier": 8_000,
}

_MOD = 2 ** 63


def derive(master: int, label: str, index: int = 0) -> int:
    """Deterministic sub-seed for ``label``; ``index`` separates repeated uses (folds, clusters)."""
    return (int(master) + OFFSETS[label] + 97 * int(index)) % _MOD
