//! Text formatting shared by the CSV writers.

/// `%.17g`: 17 significant digits, trailing zeros dropped, exponent form
/// outside `1e-4 ..= 1e17`. Enough digits that parsing gives back the same
/// `f64`.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::g17;

    #[test]
    fn matches_printf() {
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(0.0), "0");
        assert_eq!(g17(-1.0), "-1");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(0.5), "0.5");
        assert_eq!(g17(-0.41522739926869984), "-0.41522739926869984");
        assert_eq!(g17(123456.0), "123456");
        assert_eq!(g17(1e17), "1e+17");
        assert_eq!(g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(g17(0.0001), "0.0001");
        assert_eq!(g17(2.5e-300), "2.5e-300");
    }

    #[test]
    fn round_trips() {
        let mut x = 0.7311f64;
        for _ in 0..2000 {
            x = (x * 3.987).fract() * 10f64.powi(((x * 1e3) as i32 % 40) - 20);
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
            assert_eq!(g17(-x).parse::<f64>().unwrap(), -x);
        }
    }
}
