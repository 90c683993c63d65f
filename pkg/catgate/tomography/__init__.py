"""
Synthetic homodyne tomography: sampling and maximum-likelihood reconstruction
"""

_EXPORTS = {
    "QuadratureDataset": "catgate.tomography.sampling",
    "quadrature_distribution": "catgate.tomography.sampling",
    "read_dataset": "catgate.tomography.sampling",
    "sample_homodyne": "catgate.tomography.sampling",
    "write_dataset": "catgate.tomography.sampling",
    "CorrectionComparison": "catgate.tomography.maxlik",
    "ReconstructionReport": "catgate.tomography.maxlik",
    "bin_povms": "catgate.tomography.maxlik",
    "compare_corrections": "catgate.tomography.maxlik",
    "maxlik_reconstruct": "catgate.tomography.maxlik",
}


def __getattr__(name):
    if name in _EXPORTS:
        import importlib

        return getattr(importlib.import_module(_EXPORTS[name]), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = sorted(_EXPORTS)
