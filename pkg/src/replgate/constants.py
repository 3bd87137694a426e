"""Unit system: energies in µeV, times in ns."""

# hbar in µeV·ns (= 6.582119569e-16 eV·s)
HBAR = 0.6582119569
