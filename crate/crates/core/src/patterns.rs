//! Outer kernels applied per repetition block, and the kernel families the
//! pattern search draws from.
//!
//! Kernels act on row vectors: a block that carries sub-codewords
//! `(c_1, ..., c_r)` transmits, in output slot `q`, the XOR of every `c_j`
//! with `K[j][q] = 1`. Arıkan's `G₂ = [[1,0],[1,1]]` therefore sends
//! `(c_1 ⊕ c_2, c_2)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower-triangular binary matrix with unit diagonal and power-of-two size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Kernel {
    size: usize,
    /// `rows[j]` has bit `q` set iff `K[j][q] = 1`.
    rows: Vec<u64>,
}

/// One level of a kernel, `K = [[top, 0], [coupled·bottom, bottom]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSplit {
    pub coupled: bool,
    pub top: Kernel,
    pub bottom: Kernel,
}

pub const MAX_KERNEL_SIZE: usize = 64;

/// Checks the canonical kernel form; the error names the first violation.
pub fn validate_kernel(matrix: &[Vec<u8>]) -> std::result::Result<(), String> {
    let n = matrix.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(format!("size {n} is not a power of two"));
    }
    if n > MAX_KERNEL_SIZE {
        return Err(format!("size {n} exceeds {MAX_KERNEL_SIZE}"));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(format!("row {i} has {} entries, expected {n}", row.len()));
        }
        for (j, &v) in row.iter().enumerate() {
            if v > 1 {
                return Err(format!("entry ({i},{j}) = {v} is not binary"));
            }
            if i == j && v != 1 {
                return Err(format!("diagonal entry ({i},{i}) is zero, kernel is singular"));
            }
            if j > i && v != 0 {
                return Err(format!("entry ({i},{j}) above the diagonal is set"));
            }
        }
    }
    Ok(())
}

impl Kernel {
    pub fn new(matrix: &[Vec<u8>]) -> Result<Self> {
        validate_kernel(matrix).map_err(Error::InvalidKernel)?;
        let rows = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(0u64, |acc, (q, &v)| acc | (u64::from(v) << q))
            })
            .collect();
        Ok(Kernel {
            size: matrix.len(),
            rows,
        })
    }

    pub fn identity(size: usize) -> Self {
        assert!(size.is_power_of_two() && size <= MAX_KERNEL_SIZE);
        Kernel {
            size,
            rows: (0..size).map(|j| 1u64 << j).collect(),
        }
    }

    /// Arıkan's `G₂`, pattern `P₂⁽⁰⁾`.
    pub fn arikan() -> Self {
        Kernel {
            size: 2,
            rows: vec![0b01, 0b11],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        (self.rows[row] >> col) & 1 == 1
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(j, &r)| r == 1u64 << j)
    }

    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| u8::from(self.get(i, j))).collect())
            .collect()
    }

    /// Bitmask over input indices `j` feeding output slot `q`.
    pub fn column_form(&self, q: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, &r)| (r >> q) & 1 == 1)
            .fold(0, |acc, (j, _)| acc | (1u64 << j))
    }

    pub fn column_forms(&self) -> Vec<u64> {
        (0..self.size).map(|q| self.column_form(q)).collect()
    }

    fn sub_block(&self, row0: usize, col0: usize, n: usize) -> Kernel {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Kernel {
            size: n,
            rows: (row0..row0 + n)
                .map(|i| (self.rows[i] >> col0) & mask)
                .collect(),
        }
    }

    /// Splits off the outermost level; `None` for size 1 or when the lower-left
    /// block is neither zero nor a copy of the lower-right block.
    pub fn split(&self) -> Option<LevelSplit> {
        if self.size < 2 {
            return None;
        }
        let h = self.size / 2;
        let top = self.sub_block(0, 0, h);
        let bottom = self.sub_block(h, h, h);
        let lower_left = self.sub_block(h, 0, h);
        let coupled = if lower_left.rows.iter().all(|&r| r == 0) {
            false
        } else if lower_left.rows == bottom.rows {
            true
        } else {
            return None;
        };
        Some(LevelSplit {
            coupled,
            top,
            bottom,
        })
    }

    /// Block-wise matrix action: output slot `q` is the XOR of the subwords
    /// selected by column `q`; slots are concatenated in order.
    pub fn apply(&self, subwords: &[Vec<u8>]) -> Result<Vec<u8>> {
        if subwords.len() != self.size {
            return Err(Error::LengthMismatch {
                expected: self.size,
                actual: subwords.len(),
            });
        }
        let len = subwords[0].len();
        if let Some(bad) = subwords.iter().find(|w| w.len() != len) {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: bad.len(),
            });
        }
        let mut out = vec![0u8; len * self.size];
        for q in 0..self.size {
            let slot = &mut out[q * len..(q + 1) * len];
            for (j, word) in subwords.iter().enumerate() {
                if self.get(j, q) {
                    for (o, &b) in slot.iter_mut().zip(word) {
                        *o ^= b;
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn kron(a: &Kernel, b: &Kernel) -> Kernel {
    let (n, m) = (a.size, b.size);
    assert!(n * m <= MAX_KERNEL_SIZE, "kernel too large");
    let rows = (0..n * m)
        .map(|i| {
            (0..n * m).fold(0u64, |acc, j| {
                let set = a.get(i / m, j / m) && b.get(i % m, j % m);
                acc | (u64::from(set) << j)
            })
        })
        .collect();
    Kernel { size: n * m, rows }
}

pub fn apply_kernel(k: &Kernel, subwords: &[Vec<u8>]) -> Result<Vec<u8>> {
    k.apply(subwords)
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel{:?}", self.to_matrix())
    }
}

/// Row-major `0`/`1` grid, one row per line.
impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            let row: Vec<&str> = (0..self.size)
                .map(|j| if self.get(i, j) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FamilyKind {
    /// Kronecker products of `P₂⁽⁰⁾` and `P₂⁽¹⁾` over `t` levels.
    Regular { t: u32 },
    /// The eight block-coupled 4×4 kernels.
    Irregular4,
}

impl FamilyKind {
    pub fn kernel_size(&self) -> usize {
        match self {
            FamilyKind::Regular { t } => 1 << t,
            FamilyKind::Irregular4 => 4,
        }
    }

    pub fn levels(&self) -> u32 {
        self.kernel_size().trailing_zeros()
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Regular { t } => write!(f, "reg{}", 1u64 << t),
            FamilyKind::Irregular4 => write!(f, "irr4"),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "irr4" {
            return Ok(FamilyKind::Irregular4);
        }
        let size: u64 = lower
            .strip_prefix("reg")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::parse("family", s, "expected regN (N a power of two) or irr4"))?;
        if !size.is_power_of_two() || size > 16 {
            return Err(Error::parse("family", s, "regular size must be 1, 2, 4, 8 or 16"));
        }
        Ok(FamilyKind::Regular {
            t: size.trailing_zeros(),
        })
    }
}

impl TryFrom<String> for FamilyKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FamilyKind> for String {
    fn from(k: FamilyKind) -> String {
        k.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFamily {
    kind: FamilyKind,
    members: Vec<Kernel>,
}

/// Family of `2^t` regular kernels: member `i` is the Kronecker product over
/// the bits of `i`, most significant first, of `P₂⁽⁰⁾` (bit 0) and `P₂⁽¹⁾`
/// (bit 1). `t = 0` gives the single 1×1 kernel.
pub fn regular_family(t: u32) -> PatternFamily {
    let members = (0..1usize << t)
        .map(|i| {
            (0..t).rev().fold(Kernel::identity(1), |acc, level| {
                let factor = if (i >> level) & 1 == 0 {
                    Kernel::arikan()
                } else {
                    Kernel::identity(2)
                };
                kron(&acc, &factor)
            })
        })
        .collect();
    PatternFamily {
        kind: FamilyKind::Regular { t },
        members,
    }
}

/// Builds `[[a, 0], [coupled·b, b]]` from two 2×2 kernels.
fn irregular_kernel(coupled: bool, a: &Kernel, b: &Kernel) -> Kernel {
    let mut m = vec![vec![0u8; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = u8::from(a.get(i, j));
            m[i + 2][j + 2] = u8::from(b.get(i, j));
            m[i + 2][j] = u8::from(coupled && b.get(i, j));
        }
    }
    Kernel::new(&m).expect("irregular kernels are lower triangular")
}

/// The eight 4×4 kernels `[[A, 0], [e·B, B]]`, `A, B ∈ {P₂⁽⁰⁾, P₂⁽¹⁾}`.
///
/// Index bits, most significant first: `B` is the identity, `A` is the
/// identity, the halves are uncoupled. Index 0 is therefore `G₂ ⊗ G₂`,
/// index 7 the identity, index 2 sends `(c₁⊕c₃⊕c₄, c₂⊕c₄, c₃⊕c₄, c₄)` and
/// index 5 sends `(c₁⊕c₂, c₂, c₃, c₄)`.
pub fn irregular_family_r4() -> PatternFamily {
    let pick = |identity: bool| {
        if identity {
            Kernel::identity(2)
        } else {
            Kernel::arikan()
        }
    };
    let members = (0..8usize)
        .map(|i| {
            let b_identity = (i >> 2) & 1 == 1;
            let a_identity = (i >> 1) & 1 == 1;
            let uncoupled = i & 1 == 1;
            irregular_kernel(!uncoupled, &pick(a_identity), &pick(b_identity))
        })
        .collect();
    PatternFamily {
        kind: FamilyKind::Irregular4,
        members,
    }
}

impl PatternFamily {
    pub fn from_kind(kind: FamilyKind) -> Self {
        match kind {
            FamilyKind::Regular { t } => regular_family(t),
            FamilyKind::Irregular4 => irregular_family_r4(),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn kernel_size(&self) -> usize {
        self.kind.kernel_size()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Kernel] {
        &self.members
    }

    pub fn member(&self, index: usize) -> Result<&Kernel> {
        self.members.get(index).ok_or_else(|| {
            Error::out_of_range("pattern index", index, format!("[0, {})", self.members.len()))
        })
    }

    /// Index of the all-identity kernel.
    pub fn identity_index(&self) -> usize {
        self.members.len() - 1
    }
}

/// `family:index` reference such as `reg4:0` or `irr4:7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelRef {
    pub family: FamilyKind,
    pub index: usize,
}

impl KernelRef {
    pub fn resolve(&self) -> Result<Kernel> {
        PatternFamily::from_kind(self.family).member(self.index).cloned()
    }
}

impl FromStr for KernelRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (fam, idx) = s
            .split_once(':')
            .ok_or_else(|| Error::parse("kernel reference", s, "expected family:index"))?;
        let family: FamilyKind = fam.parse()?;
        let index: usize = idx
            .trim()
            .parse()
            .map_err(|_| Error::parse("kernel reference", s, "index is not a number"))?;
        let r = KernelRef { family, index };
        r.resolve()?;
        Ok(r)
    }
}

impl fmt::Display for KernelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.index)
    }
}

/// Multiset of family indices, one per repetition block, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PatternAssignment {
    indices: Vec<usize>,
}

impl PatternAssignment {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        PatternAssignment { indices }
    }

    pub fn r(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// The assignment must have one index per kernel input and stay inside
    /// the family.
    pub fn check_against(&self, family: &PatternFamily) -> Result<()> {
        if self.r() != family.kernel_size() {
            return Err(Error::Unsupported(format!(
                "{} blocks with {}×{} kernels from {}; the block count must equal the kernel size",
                self.r(),
                family.kernel_size(),
                family.kernel_size(),
                family.kind()
            )));
        }
        for &i in &self.indices {
            family.member(i)?;
        }
        Ok(())
    }

    pub fn kernels<'f>(&self, family: &'f PatternFamily) -> Result<Vec<&'f Kernel>> {
        self.check_against(family)?;
        self.indices.iter().map(|&i| family.member(i)).collect()
    }
}

impl fmt::Display for PatternAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for PatternAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches(['{', '[', '(']).trim_end_matches(['}', ']', ')']);
        let indices = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse("assignment", s, format!("bad index {:?}", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        if indices.is_empty() {
            return Err(Error::parse("assignment", s, "no indices"));
        }
        Ok(PatternAssignment::new(indices))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[u8]]) -> Vec<Vec<u8>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn kron_examples() {
        let g = Kernel::arikan();
        let i2 = Kernel::identity(2);
        let g4 = kron(&g, &g);
        assert_eq!(
            g4.to_matrix(),
            m(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 1, 1, 1]])
        );
        assert!(kron(&i2, &i2).is_identity());
        let block = kron(&i2, &g);
        assert_eq!(
            block.to_matrix(),
            m(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 1, 1]])
        );
    }

    #[test]
    fn regular_family_members() {
        let f1 = regular_family(1);
        assert_eq!(f1.members(), &[Kernel::arikan(), Kernel::identity(2)]);
        let f2 = regular_family(2);
        let g = Kernel::arikan();
        let i2 = Kernel::identity(2);
        assert_eq!(f2.members()[0], kron(&g, &g));
        assert_eq!(f2.members()[1], kron(&g, &i2));
        assert_eq!(f2.members()[2], kron(&i2, &g));
        assert_eq!(f2.members()[3], kron(&i2, &i2));
        let f3 = regular_family(3);
        assert_eq!(f3.len(), 8);
        assert!(f3.members()[7].is_identity());
        assert_eq!(regular_family(0).members(), &[Kernel::identity(1)]);
    }

    fn words(bits: &[u8]) -> Vec<Vec<u8>> {
        bits.iter().map(|&b| vec![b]).collect()
    }

    #[test]
    fn irregular_transmissions() {
        let fam = irregular_family_r4();
        assert_eq!(fam.len(), 8);
        for bits in 0u8..16 {
            let c: Vec<u8> = (0..4).map(|j| (bits >> j) & 1).collect();
            let (c1, c2, c3, c4) = (c[0], c[1], c[2], c[3]);
            assert_eq!(fam.members()[7].apply(&words(&c)).unwrap(), c);
            assert_eq!(
                fam.members()[2].apply(&words(&c)).unwrap(),
                vec![c1 ^ c3 ^ c4, c2 ^ c4, c3 ^ c4, c4]
            );
            assert_eq!(
                fam.members()[5].apply(&words(&c)).unwrap(),
                vec![c1 ^ c2, c2, c3, c4]
            );
        }
        let reg = regular_family(2);
        assert_eq!(fam.members()[0], reg.members()[0]);
        assert_eq!(fam.members()[6], reg.members()[1]);
        assert_eq!(fam.members()[1], reg.members()[2]);
    }

    #[test]
    fn apply_examples() {
        let g = Kernel::arikan();
        let out = apply_kernel(&g, &[vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(out, vec![0, 1, 1, 1, 1, 0]);
        let id = Kernel::identity(2);
        let out = apply_kernel(&id, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(out, vec![1, 0, 0, 1]);
        let p0 = regular_family(2).members()[0].clone();
        let p0 = &p0;
        assert_eq!(apply_kernel(p0, &words(&[1, 0, 1, 1])).unwrap(), vec![1, 1, 0, 1]);
        assert!(matches!(
            apply_kernel(&g, &[vec![1], vec![1, 0]]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(apply_kernel(&g, &[vec![1]]).is_err());
    }

    #[test]
    fn validation() {
        assert!(validate_kernel(&Kernel::arikan().to_matrix()).is_ok());
        let singular = m(&[&[1, 0], &[1, 0]]);
        assert!(validate_kernel(&singular).unwrap_err().contains("singular"));
        let upper = m(&[&[1, 1], &[0, 1]]);
        assert!(validate_kernel(&upper).unwrap_err().contains("above the diagonal"));
        assert!(validate_kernel(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).is_err());
        assert!(validate_kernel(&m(&[&[2, 0], &[0, 1]])).is_err());
        for fam in [regular_family(1), regular_family(2), regular_family(3), irregular_family_r4()] {
            for k in fam.members() {
                assert!(validate_kernel(&k.to_matrix()).is_ok());
            }
        }
    }

    #[test]
    fn level_split() {
        let fam = irregular_family_r4();
        let s = fam.members()[2].split().unwrap();
        assert!(s.coupled);
        assert!(s.top.is_identity());
        assert_eq!(s.bottom, Kernel::arikan());
        let s = fam.members()[5].split().unwrap();
        assert!(!s.coupled);
        assert_eq!(s.top, Kernel::arikan());
        assert!(s.bottom.is_identity());
        let odd = Kernel::new(&m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 1, 1, 0], &[0, 0, 0, 1]])).unwrap();
        assert!(odd.split().is_none());
        assert!(Kernel::identity(1).split().is_none());
    }

    #[test]
    fn references_and_assignments() {
        let r: KernelRef = "reg4:0".parse().unwrap();
        assert_eq!(r.resolve().unwrap(), regular_family(2).members()[0]);
        let r: KernelRef = "IRR4:7".parse().unwrap();
        assert!(r.resolve().unwrap().is_identity());
        assert!("irr4:8".parse::<KernelRef>().is_err());
        assert!("reg3:0".parse::<KernelRef>().is_err());
        let a: PatternAssignment = "3,0,3,3".parse().unwrap();
        assert_eq!(a.indices(), &[0, 3, 3, 3]);
        assert_eq!(a.to_string(), "{0,3,3,3}");
        assert_eq!("{0,1}".parse::<PatternAssignment>().unwrap().indices(), &[0, 1]);
        assert!("0,x".parse::<PatternAssignment>().is_err());
        assert!(a.check_against(&regular_family(2)).is_ok());
        assert!(a.check_against(&regular_family(1)).is_err());
        assert!(PatternAssignment::new(vec![0, 9]).check_against(&regular_family(1)).is_err());
        assert_eq!(Kernel::arikan().to_string(), "1 0\n1 1\n");
    }

    proptest! {
        #[test]
        fn apply_is_linear(index in 0usize..8, u in prop::collection::vec(0u8..2, 12),
                           v in prop::collection::vec(0u8..2, 12)) {
            let k = irregular_family_r4().members()[index].clone();
            let split = |w: &[u8]| w.chunks(3).map(|c| c.to_vec()).collect::<Vec<_>>();
            let uv: Vec<u8> = u.iter().zip(&v).map(|(a, b)| a ^ b).collect();
            let lhs = k.apply(&split(&uv)).unwrap();
            let ku = k.apply(&split(&u)).unwrap();
            let kv = k.apply(&split(&v)).unwrap();
            let rhs: Vec<u8> = ku.iter().zip(&kv).map(|(a, b)| a ^ b).collect();
            prop_assert_eq!(lhs, rhs);
            let id = Kernel::identity(4);
            prop_assert_eq!(id.apply(&split(&u)).unwrap(), u);
        }
    }
}
