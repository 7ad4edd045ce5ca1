"""Tails of Moebius-weighted Dirichlet series, computed several independent ways."""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .special import gamma, loggamma, rgamma, zeta, zeta_derivative, pochhammer, hurwitz_tail
from .moebius import (MoebiusBlock, MertensCheckpoint, sieve_block, mu, mertens,
                      mertens_checkpoints, map_blocks, write_block_cache, read_block_cache)
from .series import (Estimate, TailEstimate, TruncationPlan, SeriesParams, KernelSpec, plain_tail,
                     watson_ratio, alternating_partial_sum, even_partial_sums, alternating_tail,
                     moebius_tail, moebius_tails, power_series_rhs, bose_laplace_integral)
from .mellin_barnes import ContourSpec, MellinEstimate, inverse_mellin
from .residues import (ZeroTable, ResidueTerm, AsymptoticParts, load_zero_table,
                       bundled_zero_table, pole_contribution, residue_term, asymptotic_parts,
                       asymptotic_sum)
from .analysis import (SampleSeries, FitResult, ConjectureReport, fit_decay_exponent,
                       sample_moebius_tails, conjecture_report, log_grid)
