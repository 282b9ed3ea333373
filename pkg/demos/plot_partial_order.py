"""
The channel-independent partial order
=====================================

Build the relation matrix for a short code, count how much of it the
order settles, and write a dot plot of it as a PPM image.
"""

import numpy as np

from polarorder import BitIndex, combined_leq, po_relation_matrix
from polarorder.render import relation_image, to_ppm

# Channel 6 has bits 00101 and channel 23 has bits 10110.  The 1 at
# position 1 moves up and a new 1 appears, so 23 is at least as reliable.
print(combined_leq(BitIndex(6, 5), BitIndex(23, 5)))

# Two channels of length 256 that the order cannot compare
print(combined_leq(BitIndex(108, 8), BitIndex(159, 8)), combined_leq(BitIndex(159, 8), BitIndex(108, 8)))

for n in range(2, 11):
    R = po_relation_matrix(n)
    print(f"n={n:2d}  determined pairs={R.determined_count():8d}  density={R.density():.4f}")

# the density falls with n, so the order alone leaves more and more undecided
R = po_relation_matrix(7)
img = relation_image(R)
print(img.shape, np.count_nonzero(img.sum(axis=2) == 0), "black pixels")
with open("po_n7.ppm", "wb") as fh:
    fh.write(to_ppm(img))
