use std::fmt::Write as _;

use num_complex::Complex64;

use super::function::{SpectralFunction, TorusFunction};
use super::grid::TorusGrid;
use crate::error::{Error, Result};

impl TorusFunction {
    /// CSV: header `# n=<n> N=<N>`, then one value per line, row-major.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# n={} N={}\n", self.grid().dim(), self.grid().points());
        for v in self.values() {
            writeln!(out, "{v:.16e}").unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let body = header
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse(format!("missing header: {header}")))?;
        let (mut dim, mut points) = (None, None);
        for field in body.split_whitespace() {
            match field.split_once('=') {
                Some(("n", v)) => dim = v.parse::<usize>().ok(),
                Some(("N", v)) => points = v.parse::<usize>().ok(),
                _ => return Err(Error::Parse(format!("unknown header field {field}"))),
            }
        }
        let (dim, points) = dim
            .zip(points)
            .ok_or_else(|| Error::Parse("header needs n=<n> N=<N>".into()))?;
        let grid = TorusGrid::new(dim, points)?;
        let values = lines
            .map(|l| l.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{l}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        TorusFunction::new(grid, values)
    }
}

impl SpectralFunction {
    /// CSV: one line `k1,...,kn,re,im` per stored coefficient.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.iter() {
            for ki in k {
                write!(out, "{ki},").unwrap();
            }
            writeln!(out, "{:.16e},{:.16e}", c.re, c.im).unwrap();
        }
        out
    }

    /// Parses `k1,...,kn,re,im` lines; `#` comments are skipped and the
    /// cutoff is the largest `|k|_∞` present.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut dim = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() < 3 {
                return Err(Error::Parse(format!("too few fields: {line}")));
            }
            let d = fields.len() - 2;
            if *dim.get_or_insert(d) != d {
                return Err(Error::Parse(format!("inconsistent dimension: {line}")));
            }
            let k = fields[..d]
                .iter()
                .map(|f| f.parse::<i64>().map_err(|e| Error::Parse(format!("{f}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let parse = |f: &str| f.parse::<f64>().map_err(|e| Error::Parse(format!("{f}: {e}")));
            rows.push((k, Complex64::new(parse(fields[d])?, parse(fields[d + 1])?)));
        }
        let dim = dim.ok_or_else(|| Error::Parse("no coefficients".into()))?;
        let cutoff = rows.iter().map(|(k, _)| super::function::linf(k)).max().unwrap_or(0) as usize;
        let mut s = SpectralFunction::new(dim, cutoff)?;
        for (k, c) in rows {
            s.insert(k, c)?;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_function_round_trip_is_exact() {
        let g = TorusGrid::new(2, 8).unwrap();
        let v = TorusFunction::from_fn(g, |z| (z[0] * 1.3).sin() + z[1].exp()).unwrap();
        let text = v.to_csv();
        assert!(text.starts_with("# n=2 N=8\n"));
        assert_eq!(TorusFunction::from_csv(&text).unwrap(), v);
    }

    #[test]
    fn spectral_round_trip_is_exact() {
        let s = SpectralFunction::random(3, 2, 5).unwrap();
        assert_eq!(SpectralFunction::from_csv(&s.to_csv()).unwrap(), s);
    }

    #[test]
    fn bad_input() {
        assert!(TorusFunction::from_csv("1.0\n2.0").is_err());
        assert!(TorusFunction::from_csv("# n=1 N=4\n1\n2\n3").is_err());
        assert!(SpectralFunction::from_csv("1,2\n").is_err());
    }
}
