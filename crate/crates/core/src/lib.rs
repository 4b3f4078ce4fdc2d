//! Corpus-driven continuation statistics and the semantic operations they
//! support.
//!
//! A corpus is tokenized and every contiguous token span up to a maximum
//! length is counted ([`corpus`]). Count ratios give a containment-ordered
//! category of texts with hom values in `[0, 1]` ([`syntax`]). Meanings live
//! one level up, as `[0, 1]`-valued copresheaves on that category
//! ([`semantics`]): each text's meaning is its representable, and meanings
//! combine through pointwise min (and), pointwise max (or), weighted
//! (co)limits, and an internal hom (implies). Taking `-ln` of everything
//! turns the same data into a generalized metric space with a tropical
//! module structure ([`metric`]), where nearness of meanings is a distance
//! query. Every law these constructions rely on is re-checkable at runtime
//! ([`verify`]).

pub mod corpus;
pub mod metric;
pub mod semantics;
pub mod syntax;
pub mod verify;

/// Formats a value with 12 significant digits, trimming trailing zeros;
/// infinities print as `inf`.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        return "inf".to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (11 - exponent).clamp(0, 40) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::format_value;

    #[test]
    fn format_trims_and_rounds() {
        assert_eq!(format_value(0.5), "0.5");
        assert_eq!(format_value(1.0), "1");
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(format_value(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_value(123.0), "123");
    }
}
