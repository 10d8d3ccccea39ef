//! End-to-end acceptance checks for `rotor-chain`; see `tests/acceptance.rs`.
