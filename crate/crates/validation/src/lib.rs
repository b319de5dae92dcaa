//! Holds the `acceptance` test target, which checks every acceptance
//! criterion at its stated tolerance. Run it with
//! `cargo test -p dppr-validation --test acceptance`.
