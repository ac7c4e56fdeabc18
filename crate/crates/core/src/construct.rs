//! Textual constructor specs such as `hadamard:3`, `repetition:4,5` or
//! `hadamard:2*hadamard:3`.
//!
//! | spec | code |
//! |------|------|
//! | `hadamard:M` | all nonzero columns of `F_2^M` |
//! | `hadamard+identity:M` | Hadamard block of order `M` beside `I_M` |
//! | `repetition:M,K` | bounded-repetition LTC with the shipped `U` basis |
//! | `repetition:M,K,ROW/ROW/...` | same with an explicit `U` basis (no distance check) |
//! | `perfect3` | the length-4 perfect 3-LCC |
//! | `identity:N` | `I_N`, the full space |
//! | `random:M,N,SEED` | seeded random `M x N` generator |
//!
//! `A*B` is the direct product, evaluated left to right.

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::zoo::{self, LinearCode};

#[derive(Debug, Clone)]
pub struct Constructed {
    pub code: LinearCode,
    /// Whitespace-free form of the spec.
    pub name: String,
    /// `(m, k)` when the code is a single bounded-repetition LTC.
    pub ltc_layout: Option<(usize, usize)>,
}

fn bad(spec: &str, message: impl Into<String>) -> Error {
    Error::InvalidArgument(format!("construct `{spec}`: {}", message.into()))
}

fn numbers(spec: &str, args: &str, count: usize) -> Result<Vec<u64>> {
    let parts: Vec<&str> = args.split(',').collect();
    if parts.len() != count {
        return Err(bad(
            spec,
            format!("expected {count} comma-separated integers"),
        ));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<u64>()
                .map_err(|_| bad(spec, format!("`{p}` is not an integer")))
        })
        .collect()
}

fn parse_basis(spec: &str, rows: &str, k: usize) -> Result<BitMatrix> {
    let rows = rows
        .split('/')
        .filter(|r| !r.is_empty())
        .map(|r| {
            if r.len() != k || !r.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(bad(
                    spec,
                    format!("U row `{r}` must be {k} characters of 0/1"),
                ));
            }
            Ok(BitVector::from_bits(r.bytes().map(|b| b == b'1')))
        })
        .collect::<Result<Vec<_>>>()?;
    BitMatrix::from_rows(k, rows)
}

fn single(spec: &str) -> Result<Constructed> {
    let (head, args) = spec.split_once(':').unwrap_or((spec, ""));
    let mut ltc_layout = None;
    let code = match head {
        "hadamard" => zoo::hadamard(numbers(spec, args, 1)?[0] as usize)?,
        "hadamard+identity" => zoo::hadamard_plus_identity(numbers(spec, args, 1)?[0] as usize)?,
        "identity" => zoo::full_space(numbers(spec, args, 1)?[0] as usize)?,
        "perfect3" if args.is_empty() => zoo::perfect_3lcc_basic(),
        "random" => {
            let v = numbers(spec, args, 3)?;
            zoo::random_code(v[0] as usize, v[1] as usize, v[2])?
        }
        "repetition" => {
            let mut parts = args.splitn(3, ',');
            let mk = format!(
                "{},{}",
                parts.next().unwrap_or(""),
                parts.next().unwrap_or("")
            );
            let v = numbers(spec, &mk, 2)?;
            let (m, k) = (v[0] as usize, v[1] as usize);
            ltc_layout = Some((m, k));
            match parts.next() {
                Some(rows) => {
                    zoo::repetition_layout_any_distance(m, k, &parse_basis(spec, rows, k)?)?
                }
                None => {
                    let basis = zoo::repetition_layout_witness(m, k).ok_or_else(|| {
                        bad(
                            spec,
                            "no shipped U basis for these parameters; pass one explicitly",
                        )
                    })?;
                    zoo::repetition_layout(m, k, &basis)?
                }
            }
        }
        _ => return Err(bad(spec, "unknown constructor")),
    };
    Ok(Constructed {
        code,
        name: spec.to_string(),
        ltc_layout,
    })
}

pub fn construct(spec: &str) -> Result<Constructed> {
    let spec: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let mut factors = spec.split('*');
    let first = single(factors.next().unwrap_or(""))?;
    let mut code = first.code;
    let mut ltc_layout = first.ltc_layout;
    for f in factors {
        code = zoo::direct_product(&code, &single(f)?.code)?;
        ltc_layout = None;
    }
    Ok(Constructed {
        code,
        name: spec,
        ltc_layout,
    })
}
