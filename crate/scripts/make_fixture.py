"""Regenerate crates/core/tests/data/astronaut_256.pgm from scikit-image's bundled sample."""
import numpy as np
from skimage import color, data, transform

img = color.rgb2gray(data.astronaut()) * 255.0
img = transform.resize(img, (256, 256), anti_aliasing=True, preserve_range=True)
img = np.clip(np.round(img), 0, 255).astype(np.uint8)
with open("crates/core/tests/data/astronaut_256.pgm", "wb") as f:
    f.write(b"P5\n256 256\n255\n")
    f.write(img.tobytes())
