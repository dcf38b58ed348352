//! Printed block matrices of the solved torsion, and their comparison with the solver output.

use serde::Deserialize;

use crate::error::{AlgebraError, Result};
use crate::expr::{Coeff, ParamExpr};
use crate::rational::rat;

const G2_BLOCKS: &str = include_str!("../data/g2_printed_blocks.json");
const SPIN7_BLOCKS: &str = include_str!("../data/spin7_printed_blocks.json");
const TYPOS: &str = include_str!("../data/typo_allowlist.json");

/// Which combination of `T` a block prints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockPart {
    /// `(T_ij + T_ji)/2`
    Symmetric,
    /// `(T_ij − T_ji)/2`
    Antisymmetric,
    /// `T_ij`
    Entries,
}

#[derive(Debug, Clone, Deserialize)]
struct RawBlock {
    name: String,
    part: BlockPart,
    rows: Vec<usize>,
    cols: Vec<usize>,
    entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawBlocks {
    structure: String,
    blocks: Vec<RawBlock>,
}

#[derive(Debug, Clone)]
pub struct PrintedBlock {
    pub name: String,
    pub part: BlockPart,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Vec<ParamExpr>>,
}

#[derive(Debug, Clone)]
pub struct PrintedBlocks {
    pub structure: String,
    pub blocks: Vec<PrintedBlock>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TypoEntry {
    pub structure: String,
    pub block: String,
    pub row: usize,
    pub col: usize,
    pub printed: String,
    pub derived: String,
    pub note: String,
}

#[derive(Debug, Clone, Deserialize)]
struct TypoFile {
    entries: Vec<TypoEntry>,
}

/// One entry where the solver and the printed block disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryDiff {
    pub block: String,
    pub row: usize,
    pub col: usize,
    pub printed: ParamExpr,
    pub derived: ParamExpr,
    /// The matching allowlist entry, if this disagreement is a known misprint.
    pub documented: Option<TypoEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockComparison {
    pub structure: String,
    pub checked: usize,
    pub diffs: Vec<EntryDiff>,
}

impl BlockComparison {
    pub fn undocumented(&self) -> Vec<&EntryDiff> {
        self.diffs.iter().filter(|d| d.documented.is_none()).collect()
    }

    pub fn is_clean_modulo_allowlist(&self) -> bool {
        self.undocumented().is_empty()
    }
}

impl PrintedBlocks {
    pub fn g2() -> PrintedBlocks {
        Self::from_json(G2_BLOCKS).expect("bundled block data parses")
    }

    pub fn spin7() -> PrintedBlocks {
        Self::from_json(SPIN7_BLOCKS).expect("bundled block data parses")
    }

    pub fn from_json(s: &str) -> Result<PrintedBlocks> {
        let raw: RawBlocks = serde_json::from_str(s).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        let mut blocks = Vec::new();
        for b in raw.blocks {
            if b.entries.len() != b.rows.len() || b.entries.iter().any(|r| r.len() != b.cols.len()) {
                return Err(AlgebraError::Shape(format!("block {} has the wrong shape", b.name)));
            }
            let entries = b
                .entries
                .iter()
                .map(|r| r.iter().map(|s| ParamExpr::parse(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            blocks.push(PrintedBlock { name: b.name, part: b.part, rows: b.rows, cols: b.cols, entries });
        }
        Ok(PrintedBlocks { structure: raw.structure, blocks })
    }

    /// Compares every printed entry against `t(i, j)` (1-based), consulting the allowlist.
    pub fn compare<F: Fn(usize, usize) -> ParamExpr>(&self, t: F) -> BlockComparison {
        let typos = typo_allowlist();
        let half = rat(1, 2);
        let mut diffs = Vec::new();
        let mut checked = 0;
        for b in &self.blocks {
            for (x, &i) in b.rows.iter().enumerate() {
                for (y, &j) in b.cols.iter().enumerate() {
                    let derived = match b.part {
                        BlockPart::Entries => t(i, j),
                        BlockPart::Symmetric => t(i, j).add(&t(j, i)).scale(&half),
                        BlockPart::Antisymmetric => t(i, j).sub(&t(j, i)).scale(&half),
                    };
                    checked += 1;
                    let printed = &b.entries[x][y];
                    if &derived == printed {
                        continue;
                    }
                    let documented = typos
                        .iter()
                        .find(|e| {
                            e.structure == self.structure
                                && e.block == b.name
                                && (e.row, e.col) == (i, j)
                                && ParamExpr::parse(&e.printed).ok().as_ref() == Some(printed)
                                && ParamExpr::parse(&e.derived).ok().as_ref() == Some(&derived)
                        })
                        .cloned();
                    diffs.push(EntryDiff { block: b.name.clone(), row: i, col: j, printed: printed.clone(), derived, documented });
                }
            }
        }
        BlockComparison { structure: self.structure.clone(), checked, diffs }
    }
}

pub fn typo_allowlist() -> Vec<TypoEntry> {
    let f: TypoFile = serde_json::from_str(TYPOS).expect("bundled allowlist parses");
    f.entries
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_parses() {
        let g = PrintedBlocks::g2();
        assert_eq!(g.blocks.len(), 6);
        assert_eq!(g.blocks[1].entries[0][0], ParamExpr::parse("-4F - G4 + 1/24 tau0").unwrap());
        assert_eq!(PrintedBlocks::spin7().blocks.len(), 4);
        assert_eq!(typo_allowlist().len(), 2);
    }
}
