//! MacKay alist persistence.
//!
//! Layout: `n m`, `max_vn_degree max_cn_degree`, the `n` VN degrees, the `m`
//! CN degrees, then one neighbor line per VN and one per CN. Indices are
//! one-based and neighbor lines are zero-padded up to the maximum degree (at
//! least one entry per line).
//! Reading also accepts unpadded lines.

use std::fs;
use std::path::Path;

use super::TannerGraph;
use crate::error::{Error, Result};

impl TannerGraph {
    /// Canonical alist text: neighbors ascending, zero padded, no trailing
    /// spaces.
    pub fn to_alist(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, items: &mut dyn Iterator<Item = usize>| {
            let parts: Vec<String> = items.map(|x| x.to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        };
        let (dv, dc) = (self.max_vn_degree(), self.max_cn_degree());
        line(&mut out, &mut [self.n(), self.m()].into_iter());
        line(&mut out, &mut [dv, dc].into_iter());
        // an isolated node still gets a line holding a single 0
        let (dv, dc) = (dv.max(1), dc.max(1));
        line(&mut out, &mut (0..self.n()).map(|v| self.vn_degree(v)));
        line(&mut out, &mut (0..self.m()).map(|c| self.cn_degree(c)));
        for v in 0..self.n() {
            let nb = self.vn_neighbors(v);
            line(&mut out, &mut nb.iter().map(|c| c + 1).chain(std::iter::repeat_n(0, dv - nb.len())));
        }
        for c in 0..self.m() {
            let nb = self.cn_neighbors(c);
            line(&mut out, &mut nb.iter().map(|v| v + 1).chain(std::iter::repeat_n(0, dc - nb.len())));
        }
        out
    }

    pub fn from_alist(text: &str) -> Result<TannerGraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let mut next_line = |what: &str| -> Result<(usize, Vec<usize>)> {
            let (no, l) = lines.next().ok_or_else(|| Error::Parse {
                line: text.lines().count() + 1,
                msg: format!("unexpected end of file, expected {what}"),
            })?;
            let nums = l
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Parse {
                        line: no,
                        msg: format!("`{tok}` is not a nonnegative integer"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((no, nums))
        };
        let exact = |no: usize, nums: &[usize], k: usize, what: &str| -> Result<()> {
            if nums.len() != k {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("expected {k} values for {what}, found {}", nums.len()),
                });
            }
            Ok(())
        };

        let (no, dims) = next_line("dimensions")?;
        exact(no, &dims, 2, "dimensions")?;
        let (n, m) = (dims[0], dims[1]);
        let (no, maxes) = next_line("maximum degrees")?;
        exact(no, &maxes, 2, "maximum degrees")?;
        let (no, vn_deg) = next_line("VN degrees")?;
        exact(no, &vn_deg, n, "VN degrees")?;
        let (no, cn_deg) = next_line("CN degrees")?;
        exact(no, &cn_deg, m, "CN degrees")?;

        let mut neighbor_lists = |count: usize, side: &str, bound: usize, max: usize| -> Result<Vec<Vec<usize>>> {
            (0..count)
                .map(|i| {
                    let (no, nums) = next_line(&format!("{side} {} neighbors", i + 1))?;
                    if nums.len() > max.max(1) {
                        return Err(Error::Parse {
                            line: no,
                            msg: format!("{} entries exceed the declared maximum degree {max}", nums.len()),
                        });
                    }
                    let list: Vec<usize> = nums.into_iter().filter(|&x| x != 0).collect();
                    if let Some(&bad) = list.iter().find(|&&x| x > bound) {
                        return Err(Error::Parse {
                            line: no,
                            msg: format!("index {bad} exceeds {bound}"),
                        });
                    }
                    Ok(list)
                })
                .collect()
        };
        let vn_lists = neighbor_lists(n, "VN", m, maxes[0])?;
        let cn_lists = neighbor_lists(m, "CN", n, maxes[1])?;

        for (v, list) in vn_lists.iter().enumerate() {
            if list.len() != vn_deg[v] {
                return Err(Error::Validation(format!(
                    "VN {} declares degree {} but lists {} neighbors",
                    v + 1,
                    vn_deg[v],
                    list.len()
                )));
            }
        }
        for (c, list) in cn_lists.iter().enumerate() {
            if list.len() != cn_deg[c] {
                return Err(Error::Validation(format!(
                    "CN {} declares degree {} but lists {} neighbors",
                    c + 1,
                    cn_deg[c],
                    list.len()
                )));
            }
        }
        if vn_deg.iter().max().copied().unwrap_or(0) != maxes[0] || cn_deg.iter().max().copied().unwrap_or(0) != maxes[1]
        {
            return Err(Error::Validation("declared maximum degrees do not match degree lists".into()));
        }

        let mut g = TannerGraph::new(n, m, maxes[0]);
        for (v, list) in vn_lists.iter().enumerate() {
            for &c in list {
                g.add_edge(v, c - 1).map_err(|_| {
                    Error::Validation(format!("VN {} lists CN {c} more than once", v + 1))
                })?;
            }
        }
        for (c, list) in cn_lists.iter().enumerate() {
            let mut sorted = list.iter().map(|v| v - 1).collect::<Vec<_>>();
            sorted.sort_unstable();
            if sorted != g.cn_neighbors(c) {
                return Err(Error::Validation(format!(
                    "CN {} neighbor list disagrees with the VN lists",
                    c + 1
                )));
            }
        }
        Ok(g)
    }
}

/// Writes the canonical alist of `graph` to `path`, replacing it atomically.
pub fn write_alist(graph: &TannerGraph, path: &Path) -> Result<()> {
    crate::io::write_atomic(path, graph.to_alist().as_bytes())
}

pub fn read_alist(path: &Path) -> Result<TannerGraph> {
    TannerGraph::from_alist(&fs::read_to_string(path)?)
}
