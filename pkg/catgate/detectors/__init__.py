"""
APD and homodyne measurement models
"""

from catgate.detectors.measurements import (
    DEFAULT_P_DARK,
    DetectorSpec,
    PovmElement,
    apd_click_povm,
    apd_no_click_povm,
    homodyne_point_povm,
    homodyne_window_povm,
    loss_adjoint,
    loss_channel,
    loss_kraus,
    quadrature_wavefunction,
    quadrature_wavefunctions,
)

__all__ = [
    "DEFAULT_P_DARK",
    "DetectorSpec",
    "PovmElement",
    "apd_click_povm",
    "apd_no_click_povm",
    "homodyne_point_povm",
    "homodyne_window_povm",
    "loss_adjoint",
    "loss_channel",
    "loss_kraus",
    "quadrature_wavefunction",
    "quadrature_wavefunctions",
]
