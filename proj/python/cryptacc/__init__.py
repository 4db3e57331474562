from ._cryptacc import (
    AccumulatorError,
    Broadcast,
    Key,
    Scheme,
    State,
    Value,
    Witness,
    bench,
    bloom_fpr_estimate,
    compare_filters,
    fit_complexity,
    measure_bloom_fpr,
    scheme,
    scheme_names,
    simulate,
)

__all__ = [
    "AccumulatorError",
    "Broadcast",
    "Key",
    "Scheme",
    "State",
    "Value",
    "Witness",
    "bench",
    "bloom_fpr_estimate",
    "compare_filters",
    "fit_complexity",
    "measure_bloom_fpr",
    "scheme",
    "scheme_names",
    "simulate",
]
