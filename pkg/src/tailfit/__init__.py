"""Fit discrete heavy-tailed distributions to frequency data and test their plausibility."""
from .compare import VuongResult, bonferroni_adjust, pairwise_with_shared_xmin, vuong_test
from .corpus import (
    FrequencyTable,
    Wordlist,
    count_segments,
    filter_min_words,
    parse_frequency_table,
    parse_wordlist,
    write_frequency_table,
)
from .dist import (
    Exponential,
    Lognormal,
    ModelKind,
    Poisson,
    PowerLaw,
    cdf,
    hurwitz_zeta,
    log_likelihood,
    pmf,
    sample,
)
from .errors import (
    ConvergenceError,
    DegenerateComparisonError,
    DegenerateDataError,
    DomainError,
    FitError,
    InsufficientDataError,
    ParseError,
    ProtocolError,
    TailfitError,
)
from .fit import FitConfig, FitFailure, FittedModel, fit_all, fit_fixed_xmin, fit_with_xmin_scan
from .generate import (
    BirthDeathConfig,
    UrnConfig,
    simulate_birth_death,
    simulate_preferential_attachment,
    simulate_stick_breaking,
)
from .gof import BootstrapResult, bootstrap_p, is_plausible, ks_distance
from .pipeline import AnalysisRow, RunConfig, emit_plot_data, run_batch, summarize
from .rank import (
    RankModelFit,
    RankModelKind,
    expected_spectrum,
    fit_rank_model,
    rank_spectrum,
    yule_simon_reductions_check,
)

__version__ = "0.1.0"
