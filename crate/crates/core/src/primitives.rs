//! The classical objects under attack: explicit truth tables, 3-round
//! Feistel networks and fixed-length CBC-MAC over a block permutation.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{mask, BitString, MAX_WIDTH};
use crate::rng::rng_from_seed;

/// Largest input width for which a table is materialized.
pub const MAX_TABLE_WIDTH: usize = 26;
/// Largest width accepted by [`random_permutation`].
pub const MAX_PERMUTATION_WIDTH: usize = 24;

const TABLE_MAGIC: &[u8; 4] = b"SMTT";

/// Explicit table of a function `{0,1}^m -> {0,1}^r`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruthTable {
    in_width: usize,
    out_width: usize,
    entries: Vec<u32>,
    is_permutation: bool,
}

impl TruthTable {
    pub fn from_entries(in_width: usize, out_width: usize, entries: Vec<u32>) -> Result<Self> {
        check_range(in_width, 1, MAX_TABLE_WIDTH)?;
        check_range(out_width, 1, MAX_WIDTH)?;
        if entries.len() != 1usize << in_width {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {in_width}-bit input",
                entries.len()
            )));
        }
        let m = mask(out_width);
        if let Some(&bad) = entries.iter().find(|&&e| e & !m != 0) {
            return Err(Error::ValueOutOfRange {
                value: bad as u64,
                width: out_width,
            });
        }
        Ok(Self {
            in_width,
            out_width,
            entries,
            is_permutation: false,
        })
    }

    /// Like [`TruthTable::from_entries`] but also checks bijectivity and sets
    /// the permutation flag.
    pub fn permutation_from_entries(width: usize, entries: Vec<u32>) -> Result<Self> {
        let mut table = Self::from_entries(width, width, entries)?;
        if !is_bijection(&table.entries) {
            return Err(Error::NotAPermutation);
        }
        table.is_permutation = true;
        Ok(table)
    }

    pub fn from_fn(in_width: usize, out_width: usize, f: impl Fn(u32) -> u32) -> Result<Self> {
        check_range(in_width, 1, MAX_TABLE_WIDTH)?;
        let entries = (0..1u32 << in_width).map(f).collect();
        Self::from_entries(in_width, out_width, entries)
    }

    pub fn identity(width: usize) -> Result<Self> {
        Self::permutation_from_entries(width, (0..1u32 << width.min(MAX_TABLE_WIDTH)).collect())
    }

    pub fn constant(in_width: usize, out_width: usize, value: u32) -> Result<Self> {
        Self::from_fn(in_width, out_width, |_| value)
    }

    pub fn in_width(&self) -> usize {
        self.in_width
    }

    pub fn out_width(&self) -> usize {
        self.out_width
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_permutation(&self) -> bool {
        self.is_permutation
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Raw lookup; `x` must be below `2^in_width`.
    #[inline]
    pub fn value(&self, x: u32) -> u32 {
        self.entries[x as usize]
    }

    pub fn get(&self, x: BitString) -> Result<BitString> {
        if x.width() != self.in_width {
            return Err(Error::WidthMismatch {
                expected: self.in_width,
                actual: x.width(),
            });
        }
        Ok(BitString::from_raw(self.out_width, self.value(x.bits())))
    }

    pub fn inverse(&self) -> Result<TruthTable> {
        if !self.is_permutation {
            return Err(Error::NotAPermutation);
        }
        let mut inv = vec![0u32; self.entries.len()];
        for (x, &y) in self.entries.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Ok(Self {
            entries: inv,
            ..self.clone()
        })
    }

    /// Flat binary form: magic `SMTT`, one byte each for input width, output
    /// width and the permutation flag, then `2^in_width` little-endian u32
    /// entries.
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(TABLE_MAGIC)?;
        w.write_all(&[
            self.in_width as u8,
            self.out_width as u8,
            self.is_permutation as u8,
        ])?;
        for e in &self.entries {
            w.write_all(&e.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut header = [0u8; 7];
        r.read_exact(&mut header)
            .map_err(|e| Error::Format(format!("short header: {e}")))?;
        if &header[..4] != TABLE_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let (in_width, out_width) = (header[4] as usize, header[5] as usize);
        let is_perm = match header[6] {
            0 => false,
            1 => true,
            other => return Err(Error::Format(format!("bad permutation flag {other}"))),
        };
        check_range(in_width, 1, MAX_TABLE_WIDTH)?;
        let mut body = vec![0u8; 4usize << in_width];
        r.read_exact(&mut body)
            .map_err(|e| Error::Format(format!("truncated body: {e}")))?;
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing).map_err(|e| Error::Format(e.to_string()))? != 0 {
            return Err(Error::Format("trailing bytes after table body".into()));
        }
        let entries = body
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        if is_perm {
            if in_width != out_width {
                return Err(Error::Format("permutation with unequal widths".into()));
            }
            Self::permutation_from_entries(in_width, entries)
        } else {
            Self::from_entries(in_width, out_width, entries)
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::new(file))
    }
}

fn is_bijection(entries: &[u32]) -> bool {
    let mut seen = vec![false; entries.len()];
    entries.iter().all(|&e| {
        let slot = &mut seen[e as usize];
        !std::mem::replace(slot, true)
    })
}

fn check_range(width: usize, min: usize, max: usize) -> Result<()> {
    if (min..=max).contains(&width) {
        Ok(())
    } else {
        Err(Error::WidthOutOfRange { width, min, max })
    }
}

/// Uniformly random function table, each entry drawn independently.
pub fn random_function(in_width: usize, out_width: usize, seed: u64) -> Result<TruthTable> {
    check_range(in_width, 1, MAX_TABLE_WIDTH)?;
    check_range(out_width, 1, MAX_WIDTH)?;
    let mut rng = rng_from_seed(seed);
    let m = mask(out_width);
    let entries = (0..1usize << in_width).map(|_| rng.gen::<u32>() & m).collect();
    TruthTable::from_entries(in_width, out_width, entries)
}

/// Uniformly random permutation of `{0,1}^width` (Fisher-Yates over the
/// identity table).
pub fn random_permutation(width: usize, seed: u64) -> Result<TruthTable> {
    check_range(width, 1, MAX_PERMUTATION_WIDTH)?;
    let mut rng = rng_from_seed(seed);
    let mut entries: Vec<u32> = (0..1u32 << width).collect();
    entries.shuffle(&mut rng);
    Ok(TruthTable {
        in_width: width,
        out_width: width,
        entries,
        is_permutation: true,
    })
}

/// Random function on `width` bits with Simon's exact promise for `shift`:
/// `f(x) = f(y)` iff `x ⊕ y ∈ {0, shift}`. Output width is `width - 1`.
pub fn simon_promise_function(width: usize, shift: u32, seed: u64) -> Result<TruthTable> {
    check_range(width, 2, MAX_PERMUTATION_WIDTH + 1)?;
    if shift == 0 || shift & !mask(width) != 0 {
        return Err(Error::ValueOutOfRange {
            value: shift as u64,
            width,
        });
    }
    let top = 31 - shift.leading_zeros() as usize;
    let labels = random_permutation(width - 1, seed)?;
    TruthTable::from_fn(width, width - 1, |x| {
        let rep = if (x >> top) & 1 == 0 { x } else { x ^ shift };
        let index = ((rep >> (top + 1)) << top) | (rep & ((1u32 << top) - 1));
        labels.value(index)
    })
}

/// Three round functions `P_1, P_2, P_3 : {0,1}^n -> {0,1}^n`.
///
/// The round functions need not be permutations.
#[derive(Clone, Debug)]
pub struct FeistelSpec {
    n: usize,
    p1: TruthTable,
    p2: TruthTable,
    p3: TruthTable,
}

impl FeistelSpec {
    pub fn new(p1: TruthTable, p2: TruthTable, p3: TruthTable) -> Result<Self> {
        let n = p1.in_width();
        for p in [&p1, &p2, &p3] {
            if p.in_width() != n || p.out_width() != n {
                return Err(Error::WidthMismatch {
                    expected: n,
                    actual: if p.in_width() != n {
                        p.in_width()
                    } else {
                        p.out_width()
                    },
                });
            }
        }
        if 2 * n > MAX_WIDTH {
            return Err(Error::WidthOutOfRange {
                width: n,
                min: 1,
                max: MAX_WIDTH / 2,
            });
        }
        Ok(Self { n, p1, p2, p3 })
    }

    /// Independent uniformly random round functions, one derived seed each.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        use crate::rng::derive_seed;
        Self::new(
            random_function(n, n, derive_seed(seed, 1))?,
            random_function(n, n, derive_seed(seed, 2))?,
            random_function(n, n, derive_seed(seed, 3))?,
        )
    }

    pub fn all_zero(n: usize) -> Result<Self> {
        let z = TruthTable::constant(n, n, 0)?;
        Self::new(z.clone(), z.clone(), z)
    }

    pub fn half_width(&self) -> usize {
        self.n
    }

    pub fn p1(&self) -> &TruthTable {
        &self.p1
    }

    pub fn p2(&self) -> &TruthTable {
        &self.p2
    }

    pub fn p3(&self) -> &TruthTable {
        &self.p3
    }

    /// Closed form `V(a‖c) = w ‖ (a ⊕ P1(c) ⊕ P3(w))` with
    /// `w = c ⊕ P2(a ⊕ P1(c))`; `a` is the high half.
    #[inline]
    pub(crate) fn eval_raw(&self, input: u32) -> u32 {
        let n = self.n;
        let a = input >> n;
        let c = input & mask(n);
        let r1 = a ^ self.p1.value(c);
        let w = c ^ self.p2.value(r1);
        let right = r1 ^ self.p3.value(w);
        (w << n) | right
    }
}

pub fn feistel_eval(spec: &FeistelSpec, input: BitString) -> Result<BitString> {
    if input.width() != 2 * spec.n {
        return Err(Error::WidthMismatch {
            expected: 2 * spec.n,
            actual: input.width(),
        });
    }
    Ok(BitString::from_raw(2 * spec.n, spec.eval_raw(input.bits())))
}

/// Runs the rounds `L_i = R_{i-1}`, `R_i = L_{i-1} ⊕ P_i(R_{i-1})` one by one.
pub fn feistel_rounds(spec: &FeistelSpec, input: BitString) -> Result<BitString> {
    let (mut left, mut right) = input.split(spec.n)?;
    for p in [&spec.p1, &spec.p2, &spec.p3] {
        let next_right = left.xor(p.get(right)?)?;
        left = right;
        right = next_right;
    }
    left.concat(right)
}

/// Fixed-length CBC-MAC over a block permutation `pi`.
#[derive(Clone, Debug)]
pub struct CbcSpec {
    n: usize,
    ell: usize,
    pi: TruthTable,
}

impl CbcSpec {
    pub fn new(pi: TruthTable, ell: usize) -> Result<Self> {
        if !pi.is_permutation() {
            return Err(Error::NotAPermutation);
        }
        if ell == 0 {
            return Err(Error::DimensionMismatch("CBC-MAC needs at least one block".into()));
        }
        Ok(Self {
            n: pi.in_width(),
            ell,
            pi,
        })
    }

    pub fn block_width(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.ell
    }

    pub fn pi(&self) -> &TruthTable {
        &self.pi
    }

    #[inline]
    pub(crate) fn mac_raw(&self, blocks: impl IntoIterator<Item = u32>) -> u32 {
        blocks
            .into_iter()
            .fold(0u32, |state, m| self.pi.value(state ^ m))
    }

    pub(crate) fn check_message(&self, message: &[BitString]) -> Result<()> {
        if message.len() != self.ell {
            return Err(Error::DimensionMismatch(format!(
                "expected {} blocks, got {}",
                self.ell,
                message.len()
            )));
        }
        if let Some(bad) = message.iter().find(|m| m.width() != self.n) {
            return Err(Error::WidthMismatch {
                expected: self.n,
                actual: bad.width(),
            });
        }
        Ok(())
    }
}

/// `pi(...pi(pi(m_1) ⊕ m_2)... ⊕ m_ell)`.
pub fn cbc_mac(spec: &CbcSpec, message: &[BitString]) -> Result<BitString> {
    spec.check_message(message)?;
    Ok(BitString::from_raw(
        spec.n,
        spec.mac_raw(message.iter().map(|m| m.bits())),
    ))
}

pub fn iterate_pi(spec: &CbcSpec, x: BitString, times: usize) -> Result<BitString> {
    if x.width() != spec.n {
        return Err(Error::WidthMismatch {
            expected: spec.n,
            actual: x.width(),
        });
    }
    let mut v = x.bits();
    for _ in 0..times {
        v = spec.pi.value(v);
    }
    Ok(BitString::from_raw(spec.n, v))
}
