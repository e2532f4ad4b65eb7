//! Parsing of complex numbers and parameter lists: `re+imi`, comma separated.

use num_complex::Complex64;

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty number".into());
    }
    let bad = || format!("cannot parse '{s}' as a complex number (expected re, imi or re+imi)");
    let v = match t.strip_suffix('i') {
        None => Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0),
        Some(body) => imaginary(body).ok_or_else(bad)?,
    };
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

fn imaginary(body: &str) -> Option<Complex64> {
    let num = |v: &str| -> Option<f64> {
        match v {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => v.parse::<f64>().ok(),
        }
    };
    // split at the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse::<f64>().ok()?, num(&body[k..])?)),
        None => Some(Complex64::new(0.0, num(body)?)),
    }
}

pub fn parse_list(s: &str) -> Result<Vec<Complex64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_complex).collect()
}

pub fn parse_reals(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| format!("cannot parse '{v}' as a number"))).collect()
}

/// `2:4,3:3` into pairs.
pub fn parse_pairs(s: &str) -> Result<Vec<(f64, f64)>, String> {
    s.split(',')
        .map(|item| {
            let (a, b) = item.split_once(':').ok_or_else(|| format!("expected a:b, got '{item}'"))?;
            let a = a.trim().parse::<f64>().map_err(|_| format!("bad number '{a}'"))?;
            let b = b.trim().parse::<f64>().map_err(|_| format!("bad number '{b}'"))?;
            Ok((a, b))
        })
        .collect()
}
