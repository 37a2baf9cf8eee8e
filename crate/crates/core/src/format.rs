//! Plain-text state and channel files.
//!
//! ```text
//! QSTATE 1
//! kind pure
//! dims 2 2
//! 7.0710678118654757e-1 0.0000000000000000e0
//! ...
//! ```
//!
//! Entries are `re im` pairs, one per line, row-major for density matrices.
//! Blank lines and lines starting with `#` are ignored. Kraus files use the
//! header `KRAUS 1`, then `dims <in> <out>`, `count <n>` and the operators
//! back to back, each `out × in` and row-major.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{c, side_of, CMatrix, CVector, DensityMatrix, PureState, C64};
use crate::locc::KrausChannel;
use crate::states::State;

pub const STATE_MAGIC: &str = "QSTATE 1";
pub const KRAUS_MAGIC: &str = "KRAUS 1";

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next meaningful line with its 1-based number.
    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let line = raw.trim();
            if !line.is_empty() && !line.starts_with('#') {
                return Ok((i + 1, line));
            }
        }
        parse_err(self.last + 1, format!("unexpected end of file, expected {what}"))
    }

    fn keyword(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, line) = self.next_line(key)?;
        match line.split_once(char::is_whitespace) {
            Some((k, rest)) if k == key => Ok((n, rest.trim())),
            _ => parse_err(n, format!("expected `{key} ...`, found {line:?}")),
        }
    }

    fn entries(&mut self, count: usize) -> Result<(usize, Vec<C64>)> {
        let mut out = Vec::with_capacity(count);
        let mut first = self.last + 1;
        for k in 0..count {
            let (n, line) = self.next_line("a complex entry")?;
            if k == 0 {
                first = n;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [re, im] = parts.as_slice() else {
                return parse_err(n, format!("expected `re im`, found {line:?}"));
            };
            let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse { line: n, msg: format!("bad number {s:?}") });
            out.push(c(num(re)?, num(im)?));
        }
        Ok((first, out))
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.next_line("end") {
            Ok((n, line)) => parse_err(n, format!("trailing content {line:?}")),
            Err(_) => Ok(()),
        }
    }
}

fn parse_usizes(n: usize, text: &str, what: &str) -> Result<Vec<usize>> {
    let v: Vec<usize> = text
        .split_whitespace()
        .map(|s| s.parse::<usize>().map_err(|_| Error::Parse { line: n, msg: format!("bad {what} {s:?}") }))
        .collect::<Result<_>>()?;
    if v.is_empty() || v.contains(&0) {
        return parse_err(n, format!("{what} must be positive"));
    }
    Ok(v)
}

pub fn parse_state(text: &str) -> Result<State> {
    let mut lines = Lines::new(text);
    let (n, magic) = lines.next_line("header")?;
    if magic != STATE_MAGIC {
        return parse_err(n, format!("bad magic {magic:?}, expected {STATE_MAGIC:?}"));
    }
    let (kn, kind) = lines.keyword("kind")?;
    let (dn, dims_text) = lines.keyword("dims")?;
    let dims = parse_usizes(dn, dims_text, "dimension")?;
    let side = side_of(&dims).map_err(|e| Error::Parse { line: dn, msg: e.to_string() })?;
    let wrap = |line: usize| move |e: Error| Error::Parse { line, msg: e.to_string() };
    let state = match kind {
        "pure" => {
            let (first, amps) = lines.entries(side)?;
            State::Pure(PureState::new(CVector::from_vec(amps), dims).map_err(wrap(first))?)
        }
        "density" => {
            let (first, entries) = lines.entries(side * side)?;
            let m = CMatrix::from_row_slice(side, side, &entries);
            State::Mixed(DensityMatrix::new(m, dims).map_err(wrap(first))?)
        }
        other => return parse_err(kn, format!("unknown kind {other:?}")),
    };
    lines.expect_end()?;
    Ok(state)
}

fn push_entry(out: &mut String, z: C64) {
    writeln!(out, "{:.16e} {:.16e}", z.re, z.im).expect("writing to a String");
}

fn dims_line(dims: &[usize]) -> String {
    dims.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_state(state: &State) -> String {
    let mut out = String::new();
    let kind = if matches!(state, State::Pure(_)) { "pure" } else { "density" };
    writeln!(out, "{STATE_MAGIC}\nkind {kind}\ndims {}", dims_line(state.dims())).expect("writing to a String");
    match state {
        State::Pure(psi) => psi.amplitudes().iter().for_each(|&z| push_entry(&mut out, z)),
        State::Mixed(rho) => {
            let m = rho.matrix();
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    push_entry(&mut out, m[(i, j)]);
                }
            }
        }
    }
    out
}

pub fn parse_kraus(text: &str) -> Result<KrausChannel> {
    let mut lines = Lines::new(text);
    let (n, magic) = lines.next_line("header")?;
    if magic != KRAUS_MAGIC {
        return parse_err(n, format!("bad magic {magic:?}, expected {KRAUS_MAGIC:?}"));
    }
    let (dn, dims_text) = lines.keyword("dims")?;
    let dims = parse_usizes(dn, dims_text, "dimension")?;
    let [d_in, d_out] = dims.as_slice() else {
        return parse_err(dn, "Kraus dims need an input and an output dimension");
    };
    let (cn, count_text) = lines.keyword("count")?;
    let count = parse_usizes(cn, count_text, "count")?;
    let [count] = count.as_slice() else {
        return parse_err(cn, "count takes one number");
    };
    let mut ops = Vec::with_capacity(*count);
    for _ in 0..*count {
        let (_, entries) = lines.entries(d_in * d_out)?;
        ops.push(CMatrix::from_row_slice(*d_out, *d_in, &entries));
    }
    lines.expect_end()?;
    KrausChannel::new(ops).map_err(|e| Error::Parse { line: cn, msg: e.to_string() })
}

pub fn write_kraus(ch: &KrausChannel) -> String {
    let mut out = String::new();
    writeln!(out, "{KRAUS_MAGIC}\ndims {} {}\ncount {}", ch.input_dim(), ch.output_dim(), ch.operators().len())
        .expect("writing to a String");
    for v in ch.operators() {
        for i in 0..v.nrows() {
            for j in 0..v.ncols() {
                push_entry(&mut out, v[(i, j)]);
            }
        }
    }
    out
}
