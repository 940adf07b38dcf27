"""Blind curvelet-domain image watermarking.

Images are square float64 numpy arrays with values in [0, 255].
"""

from ._core import (
    ArgumentError,
    BlockDecision,
    CurveletPyramid,
    Error,
    IoError,
    KeySet,
    PnPair,
    UnavailableError,
    Watermark,
    apply_attack,
    arnold_map,
    arnold_period,
    arnold_unmap,
    attack_kinds,
    ber,
    corr2,
    dct2,
    embed,
    extract,
    extract_detailed,
    fdcut_forward,
    fdcut_inverse,
    gen_pn_pair,
    idct2,
    load_image,
    nc,
    psnr,
    run_bench,
    save_image,
    watermark_capacity,
)

__version__ = "0.1.0"
