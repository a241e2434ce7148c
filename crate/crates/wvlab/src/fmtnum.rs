//! Numeric formatting for artifact files: floats are written with 17
//! significant digits so that round-tripping reproduces the exact bits.

pub(crate) fn sig17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x == f64::INFINITY {
        return "inf".into();
    }
    if x == f64::NEG_INFINITY {
        return "-inf".into();
    }
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_round_trips() {
        for &x in &[0.0, 1.0, -1.5, std::f64::consts::PI, 1e-300, 2.2e300, 700.0f64.exp().ln()] {
            let s = sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(sig17(f64::NEG_INFINITY), "-inf");
    }
}
