"""
How much is left undetermined
=============================

The fraction gamma of channels the relations cannot classify, as a
function of the rate and of the block length, with and without
dimension reduction.
"""

import numpy as np

from polarorder import ChannelModel, gamma_sweep_n, gamma_sweep_rate

model = ChannelModel.awgn(1.0)
rates = np.round(np.arange(0.05, 1.0, 0.05), 2).tolist()

po = gamma_sweep_rate(9, model, False, rates)
dr = gamma_sweep_rate(9, model, True, rates)
print(" rate   PO     PO+DR")
for (r, g1), (_, g2) in zip(po, dr):
    print(f" {r:.2f}  {g1:.3f}  {g2:.3f}")

# the undecided fraction is largest around rate one half
print("PO peak at", max(po, key=lambda t: t[1])[0])

for n, g in gamma_sweep_n(range(4, 11), 0.5, model, True):
    print(f"N={2**n:5d}  gamma(PO+DR)={g:.3f}")
