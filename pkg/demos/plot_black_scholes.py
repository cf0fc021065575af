"""
Black-Scholes call by finite elements
=====================================

The pricing equation is a degenerate diffusion in the spot variable.  Evolve
the payoff on [K/8, 4K] and compare with the closed form.
"""
from formsemigroups import associate, gallery

S0, K, T, sigma = 100.0, 100.0, 1.0, 0.2
for r in (0.05, sigma**2):
    ref = gallery.bs_reference_price(S0, K, T, sigma, r)
    pde = gallery.bs_pde_price(S0, K, T, sigma, r, K / 8, 4 * K, n_cells=400)
    sym = associate(gallery.assemble_black_scholes(sigma, r, K / 8, 4 * K, 400)).selfadjoint
    print("r=%.3f  symmetric=%-5s  PDE %.5f  closed form %.5f  rel. error %.1e"
          % (r, sym, pde, ref, abs(pde - ref) / ref))
