//! On-disk formats for polynomials, tensors and graphs.
//!
//! Polynomials are line-oriented text:
//!
//! ```text
//! poly hermite dim 3 outputs 2
//! coord 0 basis h[] coeff 0.5
//! coord 1 basis h[0^2,2^1] coeff -1.25
//! ```
//!
//! or, on the Boolean cube, `poly boolean m 4 outputs 1`, a `bias` line with
//! `m` probabilities, and `chi[0,3]` index specs. Coefficients are written
//! in shortest round-trip form, so reading back is bit-exact.
//!
//! Tensors are a header line `ptensor p <p> n <n> seed <u64|none>`, with a
//! trailing `payload` token when `n^p` little-endian `f64` entries follow in
//! row-major order. Without a payload the entries are regenerated from the
//! seed. Graphs are `graph n <n> d <real> seed <u64|none>` followed by the
//! edge vector packed eight edges per byte, least significant bit first.

use std::io::{BufRead, Write};

use ogplab_core::graph::{edge_count, GraphSample};
use ogplab_core::poly::{Basis, BiasVector, FourierPoly, MultiIndex, Term};
use ogplab_core::tensor::PTensor;

use crate::error::{LabError, Result};

fn bad(msg: impl Into<String>) -> LabError {
    LabError::Format(msg.into())
}

fn index_spec(basis: &Basis, ix: &MultiIndex) -> String {
    let body: Vec<String> = match basis {
        Basis::Hermite { .. } => ix.factors().iter().map(|(c, d)| format!("{c}^{d}")).collect(),
        Basis::Boolean(_) => ix.factors().iter().map(|(c, _)| c.to_string()).collect(),
    };
    let tag = if basis.is_boolean() { "chi" } else { "h" };
    format!("{tag}[{}]", body.join(","))
}

fn parse_index(basis: &Basis, spec: &str) -> Result<MultiIndex> {
    let (tag, rest) = spec.split_once('[').ok_or_else(|| bad(format!("index spec `{spec}`")))?;
    let body = rest.strip_suffix(']').ok_or_else(|| bad(format!("index spec `{spec}`")))?;
    let items: Vec<&str> = if body.is_empty() { Vec::new() } else { body.split(',').collect() };
    match (basis, tag) {
        (Basis::Hermite { .. }, "h") => {
            let factors = items
                .iter()
                .map(|it| {
                    let (c, d) = it.split_once('^').ok_or_else(|| bad(format!("hermite factor `{it}`")))?;
                    Ok((num(c)?, num(d)?))
                })
                .collect::<Result<Vec<(usize, u32)>>>()?;
            Ok(MultiIndex::hermite(&factors))
        }
        (Basis::Boolean(_), "chi") => {
            let subset = items.iter().map(|c| num(c)).collect::<Result<Vec<usize>>>()?;
            Ok(MultiIndex::character(&subset)?)
        }
        _ => Err(bad(format!("index spec `{spec}` does not match the basis"))),
    }
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| bad(format!("expected a number, got `{s}`")))
}

pub fn write_poly<W: Write>(mut w: W, f: &FourierPoly) -> Result<()> {
    match f.basis() {
        Basis::Hermite { dim } => writeln!(w, "poly hermite dim {dim} outputs {}", f.n_out())?,
        Basis::Boolean(b) => {
            writeln!(w, "poly boolean m {} outputs {}", b.len(), f.n_out())?;
            let ps: Vec<String> = b.as_slice().iter().map(|p| format!("{p:?}")).collect();
            writeln!(w, "bias {}", ps.join(" "))?;
        }
    }
    for (j, t) in f.terms() {
        writeln!(w, "coord {j} basis {} coeff {:?}", index_spec(f.basis(), &t.index), t.coeff)?;
    }
    Ok(())
}

pub fn poly_to_string(f: &FourierPoly) -> String {
    let mut buf = Vec::new();
    write_poly(&mut buf, f).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn parse_poly(text: &str) -> Result<FourierPoly> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head: Vec<&str> = lines.next().ok_or_else(|| bad("empty polynomial file"))?.split_whitespace().collect();
    let (basis, n_out) = match head.as_slice() {
        ["poly", "hermite", "dim", d, "outputs", k] => (Basis::Hermite { dim: num(d)? }, num::<usize>(k)?),
        ["poly", "boolean", "m", m, "outputs", k] => {
            let m: usize = num(m)?;
            let bias_line: Vec<&str> = lines.next().ok_or_else(|| bad("missing bias line"))?.split_whitespace().collect();
            if bias_line.first() != Some(&"bias") || bias_line.len() != m + 1 {
                return Err(bad(format!("expected `bias` with {m} probabilities")));
            }
            let p = bias_line[1..].iter().map(|s| num(s)).collect::<Result<Vec<f64>>>()?;
            (Basis::Boolean(BiasVector::new(p)?), num::<usize>(k)?)
        }
        _ => return Err(bad(format!("bad polynomial header `{}`", head.join(" ")))),
    };
    let mut outputs: Vec<Vec<Term>> = vec![Vec::new(); n_out];
    for line in lines {
        let tok: Vec<&str> = line.split_whitespace().collect();
        let ["coord", j, "basis", spec, "coeff", c] = tok.as_slice() else {
            return Err(bad(format!("bad term line `{line}`")));
        };
        let j: usize = num(j)?;
        if j >= n_out {
            return Err(bad(format!("coord {j} beyond {n_out} outputs")));
        }
        outputs[j].push(Term::new(parse_index(&basis, spec)?, num(c)?));
    }
    Ok(FourierPoly::new(basis, outputs)?)
}

fn seed_token(seed: Option<u64>) -> String {
    seed.map_or_else(|| "none".to_string(), |s| s.to_string())
}

fn parse_seed(s: &str) -> Result<Option<u64>> {
    if s == "none" {
        Ok(None)
    } else {
        num(s).map(Some)
    }
}

fn read_header<R: BufRead>(r: &mut R) -> Result<String> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    if !line.ends_with('\n') {
        return Err(bad("missing header line"));
    }
    Ok(line.trim_end().to_string())
}

/// Writes the header and, when `payload` is set, the dense entries.
pub fn write_tensor<W: Write>(mut w: W, y: &PTensor, payload: bool) -> Result<()> {
    if !payload && y.seed().is_none() {
        return Err(bad("a tensor without a seed needs its payload"));
    }
    let tail = if payload { " payload" } else { "" };
    writeln!(w, "ptensor p {} n {} seed {}{tail}", y.order(), y.sites(), seed_token(y.seed()))?;
    if payload {
        for v in y.to_dense()? {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_tensor<R: BufRead>(mut r: R) -> Result<PTensor> {
    let head = read_header(&mut r)?;
    let tok: Vec<&str> = head.split_whitespace().collect();
    let (p, n, seed, payload) = match tok.as_slice() {
        ["ptensor", "p", p, "n", n, "seed", s] => (num(p)?, num(n)?, parse_seed(s)?, false),
        ["ptensor", "p", p, "n", n, "seed", s, "payload"] => (num(p)?, num(n)?, parse_seed(s)?, true),
        _ => return Err(bad(format!("bad tensor header `{head}`"))),
    };
    if !payload {
        let seed = seed.ok_or_else(|| bad("tensor has neither seed nor payload"))?;
        return Ok(PTensor::sample(p, n, seed)?);
    }
    let len = (n as u64).checked_pow(p as u32).ok_or_else(|| bad("tensor too large"))? as usize;
    let mut bytes = vec![0u8; len.checked_mul(8).ok_or_else(|| bad("tensor too large"))?];
    r.read_exact(&mut bytes).map_err(|_| bad(format!("payload shorter than {len} entries")))?;
    if r.read(&mut [0u8])? != 0 {
        return Err(bad("trailing bytes after tensor payload"));
    }
    let entries = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(PTensor::from_dense(p, n, entries)?)
}

pub fn write_graph<W: Write>(mut w: W, g: &GraphSample) -> Result<()> {
    writeln!(w, "graph n {} d {:?} seed {}", g.n(), g.d(), seed_token(g.seed()))?;
    let m = g.m();
    let mut bytes = vec![0u8; m.div_ceil(8)];
    for e in 0..m {
        if g.bit(e) {
            bytes[e / 8] |= 1 << (e % 8);
        }
    }
    w.write_all(&bytes)?;
    Ok(())
}

pub fn read_graph<R: BufRead>(mut r: R) -> Result<GraphSample> {
    let head = read_header(&mut r)?;
    let tok: Vec<&str> = head.split_whitespace().collect();
    let ["graph", "n", n, "d", d, "seed", s] = tok.as_slice() else {
        return Err(bad(format!("bad graph header `{head}`")));
    };
    let (n, d): (usize, f64) = (num(n)?, num(d)?);
    parse_seed(s)?;
    let m = edge_count(n);
    let mut bytes = vec![0u8; m.div_ceil(8)];
    r.read_exact(&mut bytes).map_err(|_| bad(format!("edge vector shorter than {m} bits")))?;
    if r.read(&mut [0u8])? != 0 {
        return Err(bad("trailing bytes after edge vector"));
    }
    let mut words = vec![0u64; m.div_ceil(64)];
    for (i, b) in bytes.iter().enumerate() {
        words[i / 8] |= (*b as u64) << (8 * (i % 8));
    }
    GraphSample::from_words(n, d, words).map_err(|e| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ogplab_core::poly::{character_indices, hermite_indices, random_poly};

    #[test]
    fn poly_text_round_trips_bit_exactly() {
        let f = random_poly(Basis::Hermite { dim: 3 }, 2, &hermite_indices(3, 3), 1.0, 5).unwrap();
        let g = parse_poly(&poly_to_string(&f)).unwrap();
        assert_eq!(f, g);
        let b = BiasVector::new(vec![0.5, 0.25, 0.1, 0.9]).unwrap();
        let f = random_poly(Basis::Boolean(b), 1, &character_indices(4, 2), 2.0, 6).unwrap();
        let text = poly_to_string(&f);
        assert!(text.contains("chi[]") && text.contains("chi[0,1]"));
        assert_eq!(parse_poly(&text).unwrap(), f);
    }

    #[test]
    fn decimal_coefficients_read_exactly() {
        let f = parse_poly("poly hermite dim 2 outputs 1\ncoord 0 basis h[1^2] coeff 0.1\n").unwrap();
        assert_eq!(f.outputs()[0][0].coeff, 0.1);
        assert!(parse_poly("poly hermite dim 2 outputs 1\ncoord 0 basis chi[1] coeff 1\n").is_err());
        assert!(parse_poly("poly hermite dim 2 outputs 1\ncoord 3 basis h[] coeff 1\n").is_err());
        assert!(parse_poly("poly boolean m 2 outputs 1\nbias 0.5\n").is_err());
    }

    #[test]
    fn tensors_round_trip() {
        let y = PTensor::sample(3, 4, 9).unwrap();
        let mut buf = Vec::new();
        write_tensor(&mut buf, &y, true).unwrap();
        assert_eq!(buf.len(), "ptensor p 3 n 4 seed 9 payload\n".len() + 64 * 8);
        assert_eq!(read_tensor(&buf[..]).unwrap().to_dense().unwrap(), y.to_dense().unwrap());
        let mut buf = Vec::new();
        write_tensor(&mut buf, &y, false).unwrap();
        assert_eq!(buf, b"ptensor p 3 n 4 seed 9\n");
        assert_eq!(read_tensor(&buf[..]).unwrap().to_dense().unwrap(), y.to_dense().unwrap());
        let z = PTensor::zeros(2, 3).unwrap();
        assert!(write_tensor(Vec::new(), &z, false).is_err());
        assert!(read_tensor(&b"ptensor p 2 n 3 seed none payload\n\0\0"[..]).is_err());
    }

    #[test]
    fn graphs_round_trip() {
        for n in [1, 2, 7, 12, 40] {
            let g = if n > 1 { GraphSample::sample(n, 0.8, n as u64).unwrap() } else { GraphSample::empty(1) };
            let mut buf = Vec::new();
            write_graph(&mut buf, &g).unwrap();
            let h = read_graph(&buf[..]).unwrap();
            assert_eq!(h.words(), g.words());
            assert_eq!(h.n(), n);
        }
        let g = GraphSample::from_edges(3, &[(0, 2)]).unwrap();
        let mut buf = Vec::new();
        write_graph(&mut buf, &g).unwrap();
        // edges (0,1), (0,2), (1,2): only bit 1 set
        assert_eq!(*buf.last().unwrap(), 0b010);
        buf.push(0);
        assert!(read_graph(&buf[..]).is_err());
    }
}
