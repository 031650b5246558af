//! Command-line function specs.
//!
//! Torus functions: `cos:k`, `sin:k`, `const:c`, `random:M`, `trig:<file>`,
//! optionally scaled as `c*term` and summed with `+`. A wave vector `k` is
//! comma-separated; a single entry in `n > 1` means `(k, 0, ..)`.
//!
//! Profiles: `gauss:a[@x0][^m]`, with `x0` and `m` comma-separated (a single
//! entry is broadcast).

use std::fs;

use fraclap::periodize::SchwartzProfile;
use fraclap::spectral_core::SpectralFunction;
use fraclap::{Error, Result};

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad {what} entry {x:?}"))))
        .collect()
}

fn widen<T: Clone + Default>(mut v: Vec<T>, n: usize, pad: bool, what: &str) -> Result<Vec<T>> {
    if v.len() == n {
        return Ok(v);
    }
    if v.len() == 1 {
        if pad {
            v.resize(n, T::default());
        } else {
            v = vec![v[0].clone(); n];
        }
        return Ok(v);
    }
    Err(Error::Input(format!("{what} has {} entries, expected {n}", v.len())))
}

/// Splits at `+` signs that start a new term (not exponent signs).
fn terms(spec: &str) -> Vec<&str> {
    let bytes = spec.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'+' && i > 0 && !matches!(bytes[i - 1], b'e' | b'E') {
            out.push(&spec[start..i]);
            start = i + 1;
        }
    }
    out.push(&spec[start..]);
    out
}

fn term(spec: &str, dim: usize, seed: u64) -> Result<SpectralFunction> {
    let spec = spec.trim();
    let (scale, body) = match spec.split_once('*') {
        Some((c, rest)) => (parse_f64(c)?, rest.trim()),
        None => (1.0, spec),
    };
    let (kind, arg) = body
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("function spec {body:?} lacks ':'")))?;
    let f = match kind {
        "cos" | "sin" => {
            let k = widen(parse_list::<i64>(arg, "wave vector")?, dim, true, "wave vector")?;
            if kind == "cos" {
                SpectralFunction::cosine(&k, 1.0)?
            } else {
                SpectralFunction::sine(&k, 1.0)?
            }
        }
        "const" => SpectralFunction::constant(dim, parse_f64(arg)?)?,
        "random" => {
            let m = arg.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad cutoff {arg:?}")))?;
            SpectralFunction::random(dim, m, seed)?
        }
        "trig" => {
            let text = fs::read_to_string(arg).map_err(|e| Error::Input(format!("cannot read {arg}: {e}")))?;
            let f = SpectralFunction::from_csv(&text)?;
            if f.dim() != dim {
                return Err(Error::Input(format!("{arg} has dimension {}, expected {dim}", f.dim())));
            }
            f
        }
        _ => return Err(Error::Parse(format!("unknown function kind {kind:?}"))),
    };
    Ok(f.scale(scale))
}

pub fn parse_torus(spec: &str, dim: usize, seed: u64) -> Result<SpectralFunction> {
    let mut parts = terms(spec).into_iter();
    let first = parts.next().unwrap_or_default();
    let mut total = term(first, dim, seed)?;
    for t in parts {
        total = total.add(&term(t, dim, seed)?)?;
    }
    Ok(total)
}

pub fn parse_profile(spec: &str, dim: usize) -> Result<SchwartzProfile> {
    let body = spec
        .trim()
        .strip_prefix("gauss:")
        .ok_or_else(|| Error::Parse(format!("profile spec {spec:?} must start with gauss:")))?;
    let (rest, monomial) = match body.split_once('^') {
        Some((r, m)) => (r, Some(widen(parse_list::<u32>(m, "monomial")?, dim, false, "monomial")?)),
        None => (body, None),
    };
    let (width, center) = match rest.split_once('@') {
        Some((a, c)) => (parse_f64(a)?, widen(parse_list::<f64>(c, "center")?, dim, false, "center")?),
        None => (parse_f64(rest)?, vec![0.0; dim]),
    };
    match monomial {
        Some(m) => SchwartzProfile::gaussian_times_monomial(width, center, m),
        None => SchwartzProfile::gaussian(width, center),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_grammar() {
        let f = parse_torus("2*cos:1+sin:2+const:0.5", 1, 0).unwrap();
        let z = 0.7f64;
        let expected = 2.0 * z.cos() + (2.0 * z).sin() + 0.5;
        assert!((f.eval(&[z]) - expected).abs() < 1e-14);
        let g = parse_torus("cos:1", 2, 0).unwrap();
        assert!((g.eval(&[0.3, 1.0]) - 0.3f64.cos()).abs() < 1e-15);
        assert!(parse_torus("cosine:1", 1, 0).is_err());
        assert!(parse_torus("cos:1,2,3", 2, 0).is_err());
        let h = parse_torus("1e+0*cos:1", 1, 0).unwrap();
        assert!((h.eval(&[0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn profile_grammar() {
        let p = parse_profile("gauss:0.5@0.1,0.2^1,0", 2).unwrap();
        assert_eq!(p.width(), 0.5);
        assert_eq!(p.center(), &[0.1, 0.2]);
        assert_eq!(p.monomial(), &[1, 0]);
        let q = parse_profile("gauss:2", 3).unwrap();
        assert_eq!(q.center(), &[0.0; 3]);
        assert!(parse_profile("lorentz:1", 1).is_err());
    }
}
