#!/usr/bin/env python3
"""Regenerates the PGM images bundled under data/bench/ and tests/data/.

The benchmark corpus is built from scikit-image's bundled sample photographs
(no network access needed). Color sources are converted to luma; non-512
sources are resized with anti-aliasing. Everything is written as binary 8-bit
PGM (P5), the only image format the tools read.

Usage: python3 scripts/make_test_images.py [repo_root]
"""

import sys
from pathlib import Path

import numpy as np
from skimage import data, transform, color


def to_u8(img):
    img = np.clip(img, 0.0, 255.0)
    return np.round(img).astype(np.uint8)


def write_pgm(path, img):
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(img.tobytes())
    print("wrote %s (%dx%d)" % (path, w, h))


def gray512(img):
    if img.ndim == 3:
        img = color.rgb2gray(img) * 255.0
    else:
        img = img.astype(float)
    if img.shape != (512, 512):
        img = transform.resize(img, (512, 512), anti_aliasing=True, preserve_range=True)
    return to_u8(img)


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1]
    bench = root / "data" / "bench"
    tdata = root / "tests" / "data"

    sources = {
        "camera": data.camera(),
        "moon": data.moon(),
        "astronaut": data.astronaut(),
        "coffee": data.coffee(),
        "rocket": data.rocket(),
        "tissue": data.immunohistochemistry(),
        "gravel": data.gravel(),
    }
    for name, img in sources.items():
        write_pgm(bench / f"{name}.pgm", gray512(img))

    cam = data.camera().astype(float)
    write_pgm(tdata / "cam92.pgm", to_u8(cam[150:242, 200:292]))
    write_pgm(tdata / "cam152.pgm", to_u8(cam[100:252, 180:332]))

    # SSIM fixture pairs with frozen reference values (see tests/test_metrics.cpp).
    rng = np.random.default_rng(20240917)
    base = cam[100:164, 200:264]
    moon = data.moon().astype(float)[200:264, 200:264]
    pairs = {
        "pair1": (base, np.clip(base + rng.normal(0, 10, base.shape), 0, 255)),
        "pair2": (base, transform.resize(
            transform.resize(base, (16, 16), anti_aliasing=True, preserve_range=True),
            (64, 64), preserve_range=True)),
        "pair3": (base, np.clip(base + 20.0, 0, 255)),
        "pair4": (base, moon),
        "pair5": (moon, np.clip(1.4 * (moon - 128) + 128, 0, 255)),
    }
    try:
        from skimage.metrics import structural_similarity
        for name, (a, b) in pairs.items():
            a8, b8 = to_u8(a), to_u8(b)
            write_pgm(tdata / "ssim" / f"{name}_a.pgm", a8)
            write_pgm(tdata / "ssim" / f"{name}_b.pgm", b8)
            value = structural_similarity(
                a8, b8, win_size=11, gaussian_weights=True, sigma=1.5,
                use_sample_covariance=False, data_range=255)
            print("%s reference ssim = %.10f" % (name, value))
    except ImportError:
        print("skimage.metrics unavailable; fixture reference values not recomputed")


if __name__ == "__main__":
    main()
