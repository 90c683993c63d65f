"""
Mode operators and linear-optical couplings
"""

from catgate.optics.ops import (
    BeamSplitterSpec,
    beam_splitter,
    displacement,
    phase_rotation,
    squeeze,
    subtraction_operator,
)

__all__ = [
    "BeamSplitterSpec",
    "beam_splitter",
    "displacement",
    "phase_rotation",
    "squeeze",
    "subtraction_operator",
]
