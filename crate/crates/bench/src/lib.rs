//! Criterion benches for `lmo-core`; see `benches/`.
