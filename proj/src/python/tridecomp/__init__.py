"""Structure / smooth / oscillatory image decomposition."""

from ._tridecomp import (
    DecompParams,
    DimensionError,
    DivergenceError,
    LambdaInit,
    ModelVariant,
    ParameterError,
    SmoothInit,
    add_noise,
    decompose,
    laplacian,
    preset_alpha_n,
    psnr,
    stddev,
    synth,
)

__all__ = [
    "DecompParams",
    "DimensionError",
    "DivergenceError",
    "LambdaInit",
    "ModelVariant",
    "ParameterError",
    "SmoothInit",
    "add_noise",
    "decompose",
    "laplacian",
    "preset_alpha_n",
    "psnr",
    "stddev",
    "synth",
]
