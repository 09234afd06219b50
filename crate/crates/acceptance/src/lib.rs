//! Holds the `acceptance` test target. It lives in its own package so that a
//! failing criterion does not keep the library's own test binaries from
//! running. Run it alone with `cargo test -p satflow-acceptance`.
