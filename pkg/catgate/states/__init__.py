"""
State constructors: coherent states, CSQs, cats and squeezed resources
"""

from catgate.states.constructors import (
    CsqSpec,
    ResourceSpec,
    cat,
    cat_norm,
    coherent,
    csq,
    db_to_s,
    displaced_csq,
    fock,
    hadamard_image,
    s_to_db,
    squeezed_single_photon,
    squeezed_thermal,
    squeezed_vacuum,
    thermal,
)

__all__ = [
    "CsqSpec",
    "ResourceSpec",
    "cat",
    "cat_norm",
    "coherent",
    "csq",
    "db_to_s",
    "displaced_csq",
    "fock",
    "hadamard_image",
    "s_to_db",
    "squeezed_single_photon",
    "squeezed_thermal",
    "squeezed_vacuum",
    "thermal",
]
