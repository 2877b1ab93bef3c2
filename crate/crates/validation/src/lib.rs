//! Home of the `acceptance` integration target (`cargo test -p lmo-validation --test acceptance`).
