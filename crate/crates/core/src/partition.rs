//! Set partitions of the qubits and the bipartitions of their blocks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on `n` for exhaustive partition enumeration.
pub const DEFAULT_ENUM_GATE: usize = 14;

/// Division of `0..n` into disjoint nonempty blocks, ordered by each block's
/// smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    labels: Vec<usize>,
}

/// Wire format `{"blocks": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds the canonical form from arbitrary blocks covering `0..n`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("qubit {v} appears in two blocks")));
                }
                labels[v] = b;
            }
        }
        Self::from_labels(&labels)
    }

    /// Canonicalizes a label vector (any label values; `usize::MAX` marks a
    /// missing qubit).
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPartition("no qubits".into()));
        }
        let mut remap = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut canon = Vec::with_capacity(labels.len());
        for (v, &l) in labels.iter().enumerate() {
            if l == usize::MAX {
                return Err(Error::InvalidPartition(format!("qubit {v} is not assigned a block")));
            }
            let b = *remap.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(v);
            canon.push(b);
        }
        Ok(Partition { blocks, labels: canon })
    }

    /// Parses `"b0,b1,...,b{n-1}"`, one block label per qubit.
    pub fn parse(n: usize, spec: &str) -> Result<Self> {
        let fields: Vec<&str> = spec.split(',').map(str::trim).collect();
        if spec.trim().is_empty() {
            return Err(Error::InvalidPartition("empty partition text".into()));
        }
        if fields.len() != n {
            return Err(Error::InvalidPartition(format!(
                "{} labels for {n} qubits (missing or extra qubit)",
                fields.len()
            )));
        }
        let labels = fields
            .iter()
            .map(|f| f.parse::<usize>().map_err(|_| Error::Parse(format!("bad block label {f:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_labels(&labels)
    }

    /// Text label form or JSON `{"blocks": ...}`.
    pub fn from_spec(n: usize, spec: &str) -> Result<Self> {
        if spec.trim_start().starts_with('{') {
            let json: PartitionJson = serde_json::from_str(spec)?;
            Self::new(n, json.blocks)
        } else {
            Self::parse(n, spec)
        }
    }

    /// Every qubit in its own block.
    pub fn singletons(n: usize) -> Self {
        Partition { blocks: (0..n).map(|v| vec![v]).collect(), labels: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &[usize] {
        &self.blocks[b]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn to_json(&self) -> PartitionJson {
        PartitionJson { blocks: self.blocks.clone() }
    }

    /// Canonical nontrivial bipartitions of the blocks; needs `m >= 2`.
    pub fn block_bipartitions(&self) -> Result<BlockBipartitions<'_>> {
        if self.m() < 2 {
            return Err(Error::InvalidPartition(format!("need at least 2 blocks, got {}", self.m())));
        }
        if self.m() > 63 {
            return Err(Error::InvalidPartition("more than 63 blocks".into()));
        }
        Ok(BlockBipartitions { p: self, next: 0, end: (1u64 << (self.m() - 1)) - 1 })
    }

    /// Restriction to the qubits of `keep` blocks, relabelled to `0..` in
    /// ascending old index. Returns the partition and `kept[new] = old`.
    pub fn restrict_to_blocks(&self, keep: &[usize]) -> Result<(Partition, Vec<usize>)> {
        for &b in keep {
            if b >= self.m() {
                return Err(Error::InvalidPartition(format!("block {b} does not exist")));
            }
        }
        let kept: Vec<usize> = (0..self.n()).filter(|&v| keep.contains(&self.labels[v])).collect();
        if kept.is_empty() {
            return Err(Error::InvalidPartition("no blocks kept".into()));
        }
        let labels: Vec<usize> = kept.iter().map(|&v| self.labels[v]).collect();
        Ok((Self::from_labels(&labels)?, kept))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// One side of a cut of the blocks. `a_side` always contains block 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockBipartition {
    pub a_side: Vec<usize>,
    pub qubits: Vec<usize>,
}

/// Iterator over the `2^(m-1) - 1` canonical cuts. Cut `t` places the
/// blocks encoded by the bits of `t + 1` (shifted past block 0) on side B.
pub struct BlockBipartitions<'a> {
    p: &'a Partition,
    next: u64,
    end: u64,
}

impl BlockBipartitions<'_> {
    /// Block-index mask of side A (bit b for block b) for cut index `t`.
    fn a_mask(m: usize, t: u64) -> u64 {
        ((1u64 << m) - 1) & !((t + 1) << 1)
    }
}

impl Iterator for BlockBipartitions<'_> {
    type Item = BlockBipartition;

    fn next(&mut self) -> Option<BlockBipartition> {
        if self.next >= self.end {
            return None;
        }
        let mask = Self::a_mask(self.p.m(), self.next);
        self.next += 1;
        let a_side: Vec<usize> = (0..self.p.m()).filter(|&b| mask >> b & 1 == 1).collect();
        let qubits = (0..self.p.n()).filter(|&v| mask >> self.p.labels[v] & 1 == 1).collect();
        Some(BlockBipartition { a_side, qubits })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.end - self.next) as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for BlockBipartitions<'_> {}

/// Lazy stream of every partition of `0..n` into exactly `m` blocks, in
/// lexicographic order of restricted growth strings.
pub struct MPartitions {
    n: usize,
    m: usize,
    pub(crate) rgs: Vec<usize>,
    /// prefix maxima: `maxp[i] = max(rgs[..=i])`
    maxp: Vec<usize>,
    done: bool,
}

impl MPartitions {
    fn first(&mut self) {
        // 0..0 1 2 .. m-1 is the smallest RGS with exactly m blocks
        for i in 0..self.n {
            self.rgs[i] = i.saturating_sub(self.n - self.m);
        }
        self.fix_maxima(0);
    }

    fn fix_maxima(&mut self, from: usize) {
        for i in from..self.n {
            let prev = if i == 0 { 0 } else { self.maxp[i - 1] };
            self.maxp[i] = prev.max(self.rgs[i]);
        }
    }

    /// Advances to the next RGS with exactly `m` blocks.
    pub(crate) fn advance(&mut self) -> bool {
        let (n, m) = (self.n, self.m);
        for i in (1..n).rev() {
            let limit = (self.maxp[i - 1] + 1).min(m - 1);
            let rest = n - i - 1;
            let feasible = (self.rgs[i] + 1..=limit).find(|&v| m - 1 - self.maxp[i - 1].max(v) <= rest);
            let Some(v) = feasible else { continue };
            self.rgs[i] = v;
            let mut cur = self.maxp[i - 1].max(v);
            for j in i + 1..n {
                if m - 1 - cur >= n - j {
                    cur += 1;
                    self.rgs[j] = cur;
                } else {
                    self.rgs[j] = 0;
                }
            }
            self.fix_maxima(i);
            return true;
        }
        false
    }

    /// Current labels as a [`Partition`].
    fn current(&self) -> Partition {
        let mut blocks = vec![Vec::new(); self.m];
        for (v, &b) in self.rgs.iter().enumerate() {
            blocks[b].push(v);
        }
        Partition { blocks, labels: self.rgs.clone() }
    }
}

impl Iterator for MPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let p = self.current();
        self.done = !self.advance();
        Some(p)
    }
}

/// All partitions of `0..n` into exactly `m` blocks. Refuses `n` above
/// `gate` (use [`DEFAULT_ENUM_GATE`] unless overriding).
pub fn enumerate_m_partitions(n: usize, m: usize, gate: usize) -> Result<MPartitions> {
    if m == 0 || m > n {
        return Err(Error::InvalidPartition(format!("m = {m} out of range 1..={n}")));
    }
    if n > gate {
        return Err(Error::GateExceeded { what: "partition enumeration", n, gate });
    }
    let mut it = MPartitions { n, m, rgs: vec![0; n], maxp: vec![0; n], done: false };
    it.first();
    Ok(it)
}

/// Stirling number of the second kind, by the standard recurrence.
pub fn stirling2(n: usize, m: usize) -> u128 {
    let mut row = vec![0u128; m + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=m.min(i)).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[m]
}
