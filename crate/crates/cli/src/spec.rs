//! Parsers for the tiny surface syntax: distributions, complex vectors,
//! matrices, and condition events.

use anyhow::{anyhow, bail, Context, Result};
use levylab::concentration::ConditionEvent;
use levylab::numerics::{C64, ComplexMatrix, ComplexVec, NoiseDistribution};

/// "1.5-2i" → C64. Accepts pure reals, pure imaginaries ("2i", "-i"), and
/// full "a+bi" / "a-bi" forms.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t = s.trim();
    if t.is_empty() {
        bail!("empty complex literal");
    }
    if let Ok(re) = t.parse::<f64>() {
        return Ok(C64::new(re, 0.0));
    }
    if let Some(im_part) = t.strip_suffix(['i', 'I']) {
        // Split at the last +/- that is not an exponent sign or leading sign.
        let bytes = im_part.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(i) => (&im_part[..i], &im_part[i..]),
            None => ("0", im_part),
        };
        let im: f64 = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().with_context(|| format!("bad imaginary part in '{s}'"))?,
        };
        let re: f64 = if re_str.is_empty() {
            0.0
        } else {
            re_str.parse().with_context(|| format!("bad real part in '{s}'"))?
        };
        return Ok(C64::new(re, im));
    }
    bail!("cannot parse complex literal '{s}'")
}

pub fn parse_vector(s: &str) -> Result<ComplexVec> {
    let entries: Result<Vec<C64>> = s.split(',').map(parse_complex).collect();
    ComplexVec::new(entries?).map_err(|e| anyhow!("{e}"))
}

/// Distribution specs: `rademacher`, `complex-bernoulli-symmetric`,
/// `standard-complex-gaussian` (alias `gaussian`), `point-mass:<c>`, or
/// `discrete:<re+imi>:<prob>,<re+imi>:<prob>,...`.
pub fn parse_dist(s: &str) -> Result<NoiseDistribution> {
    let t = s.trim();
    match t {
        "rademacher" => return Ok(NoiseDistribution::rademacher()),
        "complex-bernoulli-symmetric" => {
            return Ok(NoiseDistribution::complex_bernoulli_symmetric())
        }
        "standard-complex-gaussian" | "gaussian" => {
            return Ok(NoiseDistribution::standard_complex_gaussian())
        }
        _ => {}
    }
    if let Some(rest) = t.strip_prefix("point-mass:") {
        return Ok(NoiseDistribution::point_mass(parse_complex(rest)?));
    }
    if let Some(rest) = t.strip_prefix("discrete:") {
        let mut atoms = Vec::new();
        for pair in rest.split(',') {
            let (value, prob) = pair
                .rsplit_once(':')
                .ok_or_else(|| anyhow!("atom '{pair}' must be <complex>:<prob>"))?;
            atoms.push((parse_complex(value)?, prob.trim().parse::<f64>()?));
        }
        return NoiseDistribution::discrete(atoms).map_err(|e| anyhow!("{e}"));
    }
    bail!("unknown distribution '{s}'")
}

/// Condition specs: `g-eps:<epsilon>`.
pub fn parse_condition(s: &str) -> Result<ConditionEvent> {
    if let Some(eps) = s.strip_prefix("g-eps:") {
        let epsilon: f64 = eps.parse()?;
        return ConditionEvent::g_epsilon(epsilon).map_err(|e| anyhow!("{e}"));
    }
    bail!("unknown condition '{s}' (expected g-eps:<epsilon>)")
}

/// Matrix specs: `zero`, `identity[:scale]`, or `file:<path>` with one CSV
/// row of complex entries per matrix row.
pub fn parse_matrix(s: &str, n: usize) -> Result<ComplexMatrix> {
    let t = s.trim();
    if t == "zero" {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    if t == "identity" {
        return Ok(ComplexMatrix::identity(n));
    }
    if let Some(scale) = t.strip_prefix("identity:") {
        let c: f64 = scale.parse()?;
        return Ok(ComplexMatrix::identity(n).scaled(C64::new(c, 0.0)));
    }
    if let Some(path) = t.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let mut rows: Vec<Vec<C64>> = Vec::new();
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            rows.push(line.split(',').map(parse_complex).collect::<Result<_>>()?);
        }
        let rows_n = rows.len();
        if rows_n == 0 || rows.iter().any(|r| r.len() != rows_n) {
            bail!("matrix file must be square and nonempty");
        }
        if n != 0 && rows_n != n {
            bail!("matrix file is {rows_n}x{rows_n}, expected {n}x{n}");
        }
        let data: Vec<C64> = rows.into_iter().flatten().collect();
        return ComplexMatrix::new(rows_n, rows_n, data).map_err(|e| anyhow!("{e}"));
    }
    bail!("unknown matrix spec '{s}' (zero | identity[:c] | file:<path>)")
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(Into::into))
        .collect()
}
