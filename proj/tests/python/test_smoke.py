import os
from pathlib import Path

import numpy as np
import pytest

import curvemark as cm

DATA = Path(os.environ.get("CURVEMARK_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))


@pytest.fixture(scope="module")
def lena():
    return cm.load_image(DATA / "lena.png")


def test_round_trip(lena):
    keys = cm.KeySet(key1=0x1234, key2=20)
    wm = cm.Watermark.random(64, 5)
    marked = cm.embed(lena, wm, keys)
    assert marked.shape == (512, 512)
    assert np.array_equal(marked, np.round(marked))
    assert cm.extract(marked, keys) == wm
    assert 37.0 <= cm.psnr(lena, marked) <= 44.0
    assert cm.nc(wm, cm.extract(marked, keys)) == 1.0


def test_watermark_forms():
    wm = cm.Watermark("0123456789abcdef")
    assert wm.hex() == "0123456789abcdef"
    assert len(wm) == 64 and wm[-1] == 1
    assert cm.Watermark(list(wm.bits)) == wm
    assert cm.ber(wm, wm) == 0.0


def test_attacks(lena):
    assert "jpeg" in cm.attack_kinds()
    out = cm.apply_attack(lena, "salt_pepper", 0.0, seed=3)
    assert np.array_equal(out, lena)
    jpg = cm.apply_attack(lena, "jpeg", 30)
    assert jpg.shape == lena.shape and cm.psnr(lena, jpg) < 60
    with pytest.raises(cm.ArgumentError):
        cm.apply_attack(lena, "jpeg", 0)


def test_transform_exact():
    rng = np.random.default_rng(1)
    block = rng.uniform(0, 255, (64, 64))
    pyr = cm.fdcut_forward(block)
    assert pyr.coarse.shape == (21, 21)
    assert len(pyr.bands) == 1 and len(pyr.bands[0]) == 16
    assert np.max(np.abs(cm.fdcut_inverse(pyr) - block)) < 1e-8
    assert abs(pyr.energy() - np.sum(block**2)) < 1e-6 * np.sum(block**2)
    assert np.allclose(cm.idct2(cm.dct2(block)), block)


def test_arnold_and_pn():
    assert cm.arnold_period(512) == 384
    img = np.arange(64 * 64, dtype=float).reshape(64, 64) % 256
    assert np.array_equal(cm.arnold_unmap(cm.arnold_map(img, 5), 5), img)
    pair = cm.gen_pn_pair(7, 66)
    assert abs(cm.corr2(pair.seq_one, pair.seq_zero)) <= 0.1


def test_errors(tmp_path):
    with pytest.raises(cm.IoError):
        cm.load_image(tmp_path / "missing.png")
    with pytest.raises(cm.ArgumentError):
        cm.embed(np.zeros((100, 100)), "00")
    with pytest.raises(cm.Error):
        cm.KeySet(key2=384).validate(512)
