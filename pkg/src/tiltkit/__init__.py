"""Linkage blocks, fixed-point components, antispherical KL data and tilting
characters for reductive groups in characteristic ℓ."""

from tiltkit.rootdata import RootDatum, build_root_datum

__all__ = ["RootDatum", "build_root_datum"]
__version__ = "0.1.0"
