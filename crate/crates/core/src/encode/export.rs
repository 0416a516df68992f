//! Per-instance graph files for graph-network consumers.
//!
//! A record carries the augmented system `Â = [A | −I]` as triplets together
//! with raw node features for the two node types: variable nodes (degree,
//! positive and negative occurrence counts) and slack nodes (clause width,
//! `b_i`, positive and negative literal counts). Two encodings exist, JSON and
//! a length-prefixed little-endian binary form. `docs/formats.md` specifies both.

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::encode_augmented;
use crate::cnf::{Assignment, CnfFormula, Label};

pub const GRAPH_MAGIC: &[u8; 4] = b"SFGR";
pub const GRAPH_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum GraphDecodeError {
    #[error("bad magic bytes")]
    Magic,
    #[error("unsupported graph format version {0}")]
    Version(u32),
    #[error("invalid label byte {0}")]
    Label(u8),
    #[error("invalid assignment byte {0}")]
    Bit(u8),
    #[error("section length {0} too large")]
    Length(u64),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub version: u32,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub widths: Vec<u32>,
    /// `(row, col, value)` entries of `Â`, row-major; columns `n..n+m` are the slack block.
    pub a_hat: Vec<(u32, u32, i8)>,
    pub b: Vec<i64>,
    /// Number of variable–slack edges, i.e. nonzeros of `A`.
    pub num_edges: usize,
    /// `[degree, positive, negative]` per variable node.
    pub variable_features: Vec<[u32; 3]>,
    /// `[width, b_i, positive, negative]` per slack node.
    pub slack_features: Vec<[i64; 4]>,
    pub label: Label,
    /// Satisfying assignment, SAT instances only.
    pub witness: Option<String>,
    /// Planted reference assignment of an UNSAT instance. It violates at least one clause.
    pub reference_assignment: Option<String>,
}

impl GraphRecord {
    pub fn build(f: &CnfFormula, label: Label, planted: Option<&Assignment>) -> Self {
        let aug = encode_augmented(f);
        let n = f.num_vars();
        let counts = aug.a_hat.column_sign_counts(n);
        let variable_features = counts
            .iter()
            .map(|&(pos, neg)| [pos + neg, pos, neg])
            .collect();
        let slack_features = f
            .clauses()
            .iter()
            .zip(&aug.b)
            .map(|(c, &b)| {
                let neg = c.num_negative() as i64;
                [c.width() as i64, b, c.width() as i64 - neg, neg]
            })
            .collect();
        let bits = planted.map(Assignment::to_bit_string);
        let (witness, reference_assignment) = match label {
            Label::Sat => (bits, None),
            Label::Unsat => (None, bits),
        };
        GraphRecord {
            version: GRAPH_VERSION,
            num_vars: n,
            num_clauses: f.num_clauses(),
            widths: f.clauses().iter().map(|c| c.width() as u32).collect(),
            a_hat: aug
                .a_hat
                .triplets()
                .map(|t| (t.row, t.col, t.value))
                .collect(),
            b: aug.b,
            num_edges: f.num_literals(),
            variable_features,
            slack_features,
            label,
            witness,
            reference_assignment,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph records always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(GRAPH_MAGIC)?;
        w.write_all(&GRAPH_VERSION.to_le_bytes())?;
        w.write_all(&[match self.label {
            Label::Sat => 0,
            Label::Unsat => 1,
        }])?;
        let flags = self.witness.is_some() as u8 | (self.reference_assignment.is_some() as u8) << 1;
        w.write_all(&[flags])?;
        w.write_all(&0u16.to_le_bytes())?;
        put_u64(&mut w, self.num_vars as u64)?;
        put_u64(&mut w, self.num_clauses as u64)?;

        put_u64(&mut w, self.widths.len() as u64)?;
        for k in &self.widths {
            w.write_all(&k.to_le_bytes())?;
        }
        put_u64(&mut w, self.a_hat.len() as u64)?;
        for &(r, c, v) in &self.a_hat {
            w.write_all(&r.to_le_bytes())?;
            w.write_all(&c.to_le_bytes())?;
            w.write_all(&v.to_le_bytes())?;
        }
        put_u64(&mut w, self.b.len() as u64)?;
        for b in &self.b {
            w.write_all(&b.to_le_bytes())?;
        }
        put_u64(&mut w, self.num_edges as u64)?;
        put_u64(&mut w, self.variable_features.len() as u64)?;
        for row in &self.variable_features {
            for v in row {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        put_u64(&mut w, self.slack_features.len() as u64)?;
        for row in &self.slack_features {
            for v in row {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        for bits in [&self.witness, &self.reference_assignment]
            .into_iter()
            .flatten()
        {
            put_u64(&mut w, bits.len() as u64)?;
            w.write_all(&bits.bytes().map(|b| b - b'0').collect::<Vec<u8>>())?;
        }
        Ok(())
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_binary(&mut out)
            .expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self, GraphDecodeError> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != GRAPH_MAGIC {
            return Err(GraphDecodeError::Magic);
        }
        let version = u32::from_le_bytes(take(&mut r)?);
        if version != GRAPH_VERSION {
            return Err(GraphDecodeError::Version(version));
        }
        let [label, flags]: [u8; 2] = take(&mut r)?;
        let label = match label {
            0 => Label::Sat,
            1 => Label::Unsat,
            other => return Err(GraphDecodeError::Label(other)),
        };
        let _reserved: [u8; 2] = take(&mut r)?;
        let num_vars = get_u64(&mut r)? as usize;
        let num_clauses = get_u64(&mut r)? as usize;

        let widths = section(&mut r, |r| Ok(u32::from_le_bytes(take(r)?)))?;
        let a_hat = section(&mut r, |r| {
            let row = u32::from_le_bytes(take(r)?);
            let col = u32::from_le_bytes(take(r)?);
            let value = i8::from_le_bytes(take(r)?);
            Ok((row, col, value))
        })?;
        let b = section(&mut r, |r| Ok(i64::from_le_bytes(take(r)?)))?;
        let num_edges = get_u64(&mut r)? as usize;
        let variable_features = section(&mut r, |r| {
            let mut row = [0u32; 3];
            for v in &mut row {
                *v = u32::from_le_bytes(take(r)?);
            }
            Ok(row)
        })?;
        let slack_features = section(&mut r, |r| {
            let mut row = [0i64; 4];
            for v in &mut row {
                *v = i64::from_le_bytes(take(r)?);
            }
            Ok(row)
        })?;
        let mut read_bits = |present: bool| -> Result<Option<String>, GraphDecodeError> {
            if !present {
                return Ok(None);
            }
            let bytes = section(&mut r, |r| Ok(u8::from_le_bytes(take(r)?)))?;
            bytes
                .into_iter()
                .map(|b| match b {
                    0 => Ok('0'),
                    1 => Ok('1'),
                    other => Err(GraphDecodeError::Bit(other)),
                })
                .collect::<Result<String, _>>()
                .map(Some)
        };
        let witness = read_bits(flags & 1 != 0)?;
        let reference_assignment = read_bits(flags & 2 != 0)?;
        Ok(GraphRecord {
            version,
            num_vars,
            num_clauses,
            widths,
            a_hat,
            b,
            num_edges,
            variable_features,
            slack_features,
            label,
            witness,
            reference_assignment,
        })
    }
}

fn put_u64<W: Write>(w: &mut W, v: u64) -> io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn get_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    Ok(u64::from_le_bytes(take(r)?))
}

fn take<const N: usize, R: Read>(r: &mut R) -> io::Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

// Sections never exceed this many elements; guards allocation on corrupt input.
const MAX_SECTION: u64 = 1 << 32;

fn section<T, R: Read>(
    r: &mut R,
    mut item: impl FnMut(&mut R) -> io::Result<T>,
) -> Result<Vec<T>, GraphDecodeError> {
    let len = get_u64(r)?;
    if len > MAX_SECTION {
        return Err(GraphDecodeError::Length(len));
    }
    let mut out = Vec::with_capacity(len.min(1 << 16) as usize);
    for _ in 0..len {
        out.push(item(r)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> (CnfFormula, Assignment) {
        (
            CnfFormula::from_dimacs_clauses(3, &[&[1, -2, -3], &[2, 3]]).unwrap(),
            Assignment::from_bit_string("101").unwrap(),
        )
    }

    #[test]
    fn sat_example_graph() {
        let (f, x) = example();
        let g = GraphRecord::build(&f, Label::Sat, Some(&x));
        assert_eq!((g.num_vars, g.num_clauses, g.num_edges), (3, 2, 5));
        assert_eq!(g.a_hat.len(), 7);
        assert_eq!(g.variable_features, vec![[1, 1, 0], [2, 1, 1], [2, 1, 1]]);
        assert_eq!(g.slack_features, vec![[3, -1, 1, 2], [2, 1, 2, 0]]);
        assert_eq!(g.b, vec![-1, 1]);
        assert_eq!(g.witness.as_deref(), Some("101"));
        assert!(g.reference_assignment.is_none());
    }

    #[test]
    fn unsat_graph_has_no_witness() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1], &[-1]]).unwrap();
        let x = Assignment::from_bit_string("1").unwrap();
        let g = GraphRecord::build(&f, Label::Unsat, Some(&x));
        assert!(g.witness.is_none());
        assert_eq!(g.reference_assignment.as_deref(), Some("1"));
    }

    #[test]
    fn binary_and_json_decode_identically() {
        let (f, x) = example();
        for label in [Label::Sat, Label::Unsat] {
            let g = GraphRecord::build(&f, label, Some(&x));
            let from_json = GraphRecord::from_json(&g.to_json()).unwrap();
            let from_bin = GraphRecord::read_binary(g.to_binary().as_slice()).unwrap();
            assert_eq!(from_json, g);
            assert_eq!(from_bin, g);
        }
    }

    #[test]
    fn binary_header_layout() {
        let (f, x) = example();
        let bytes = GraphRecord::build(&f, Label::Sat, Some(&x)).to_binary();
        assert_eq!(&bytes[..4], b"SFGR");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(bytes[8], 0);
        assert_eq!(bytes[9], 1);
        assert_eq!(&bytes[12..20], &3u64.to_le_bytes());
    }

    #[test]
    fn binary_rejects_corruption() {
        let (f, x) = example();
        let mut bytes = GraphRecord::build(&f, Label::Sat, Some(&x)).to_binary();
        assert!(GraphRecord::read_binary(&bytes[..bytes.len() - 1]).is_err());
        bytes[0] = b'X';
        assert!(matches!(
            GraphRecord::read_binary(bytes.as_slice()),
            Err(GraphDecodeError::Magic)
        ));
    }
}
