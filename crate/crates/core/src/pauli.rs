//! Phased Pauli strings.
//!
//! A [`PauliTerm`] stores the operator `i^q · σ^{l_1} ⊗ … ⊗ σ^{l_m}` as a pair of
//! bitmasks (x-part, z-part) plus `q mod 4`. A site with both bits set holds
//! `σ^y` itself, not `σ^x σ^z`; products follow the table `XY = iZ`, `YZ = iX`,
//! `ZX = iY`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const XYZ: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    /// Lowercase edge label used by tree files (`x`, `y`, `z`).
    pub fn label(self) -> char {
        self.as_char().to_ascii_lowercase()
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' | 'x' => Some(Letter::X),
            'Y' | 'y' => Some(Letter::Y),
            'Z' | 'z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// `i^phase` times a tensor product of Pauli letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    width: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

#[inline]
fn blocks(width: usize) -> usize {
    width.div_ceil(64)
}

#[inline]
fn popcount(words: impl Iterator<Item = u64>) -> u32 {
    words.map(u64::count_ones).sum()
}

impl PauliTerm {
    /// The identity on `width` qubits with phase `+1`.
    pub fn identity(width: usize) -> Self {
        PauliTerm {
            width,
            x: vec![0; blocks(width)],
            z: vec![0; blocks(width)],
            phase: 0,
        }
    }

    /// `i^phase` times a single letter at `pos`.
    pub fn single(width: usize, pos: usize, letter: Letter, phase: u8) -> Self {
        let mut t = PauliTerm::identity(width).with_phase(phase);
        t.set_letter(pos, letter);
        t
    }

    pub fn from_letters(phase: u8, letters: &[Letter]) -> Self {
        let mut t = PauliTerm::identity(letters.len()).with_phase(phase);
        for (k, &l) in letters.iter().enumerate() {
            t.set_letter(k, l);
        }
        t
    }

    /// Builds a word from `(position, letter)` pairs; later pairs overwrite earlier ones.
    pub fn from_sparse(width: usize, phase: u8, sites: &[(usize, Letter)]) -> Self {
        let mut t = PauliTerm::identity(width).with_phase(phase);
        for &(k, l) in sites {
            t.set_letter(k, l);
        }
        t
    }

    /// Product of `σ^z` over `positions`.
    pub fn z_string(width: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut t = PauliTerm::identity(width);
        for k in positions {
            t.set_letter(k, Letter::Z);
        }
        t
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Exponent `q` of the global factor `i^q`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// Multiplies by `i^k`.
    pub fn times_i(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) & 3;
        self
    }

    pub fn letter(&self, pos: usize) -> Letter {
        assert!(
            pos < self.width,
            "qubit {pos} out of range for width {}",
            self.width
        );
        let (w, b) = (pos / 64, pos % 64);
        Letter::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn set_letter(&mut self, pos: usize, letter: Letter) {
        assert!(
            pos < self.width,
            "qubit {pos} out of range for width {}",
            self.width
        );
        let (w, b) = (pos / 64, pos % 64);
        let (xb, zb) = letter.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.width).map(|k| self.letter(k))
    }

    /// Positions carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, (&xw, &zw)) in self.x.iter().zip(&self.z).enumerate() {
            let mut bits = xw | zw;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        popcount(self.x.iter().zip(&self.z).map(|(a, b)| a | b)) as usize
    }

    pub fn is_identity_word(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// True when every letter is `I` or `Z`.
    pub fn is_z_only(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    /// Same letters with phase reset to `+1`.
    pub fn word(&self) -> PauliTerm {
        self.clone().with_phase(0)
    }

    /// Hermitian conjugate: `(i^q P)† = i^{-q} P`.
    pub fn dagger(&self) -> PauliTerm {
        self.clone().with_phase((4 - self.phase) & 3)
    }

    /// True if the represented operator is Hermitian (`q` even).
    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    fn check_width(&self, other: &PauliTerm) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &PauliTerm) -> Result<PauliTerm> {
        self.check_width(other)?;
        // Write each factor as i^{|x&z|} X^x Z^z, commute Z^{z1} past X^{x2}
        // (sign (-1)^{|z1&x2|}) and convert back to the Y convention.
        let y1 = popcount(self.x.iter().zip(&self.z).map(|(a, b)| a & b));
        let y2 = popcount(other.x.iter().zip(&other.z).map(|(a, b)| a & b));
        let swap = popcount(self.z.iter().zip(&other.x).map(|(a, b)| a & b));
        let x: Vec<u64> = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        let y3 = popcount(x.iter().zip(&z).map(|(a, b)| a & b));
        let exp = self.phase as u32 + other.phase as u32 + y1 + y2 + 2 * swap + 4 * y3 - y3;
        Ok(PauliTerm {
            width: self.width,
            x,
            z,
            phase: (exp % 4) as u8,
        })
    }

    /// True iff `self · other = -other · self`.
    pub fn anticommutes(&self, other: &PauliTerm) -> Result<bool> {
        self.check_width(other)?;
        let s = popcount(
            self.x
                .iter()
                .zip(&other.z)
                .zip(self.z.iter().zip(&other.x))
                .map(|((a, b), (c, d))| (a & b) ^ (c & d)),
        );
        Ok(s % 2 == 1)
    }

    pub fn commutes(&self, other: &PauliTerm) -> Result<bool> {
        self.anticommutes(other).map(|a| !a)
    }

    /// Same letters, ignoring phase.
    pub fn same_word(&self, other: &PauliTerm) -> bool {
        self.width == other.width && self.x == other.x && self.z == other.z
    }

    /// Inserts `letter` as a new qubit at position 0.
    pub fn prepend(&self, letter: Letter) -> PauliTerm {
        let mut out = PauliTerm::identity(self.width + 1).with_phase(self.phase);
        out.set_letter(0, letter);
        for k in self.support() {
            out.set_letter(k + 1, self.letter(k));
        }
        out
    }

    /// Masks in computational-basis index layout: qubit `k` is bit `width-1-k`.
    /// Only meaningful for `width <= 63`.
    pub(crate) fn basis_masks(&self) -> (u64, u64) {
        debug_assert!(self.width <= 63);
        let (mut xm, mut zm) = (0u64, 0u64);
        for k in self.support() {
            let bit = 1u64 << (self.width - 1 - k);
            let (xb, zb) = self.letter(k).bits();
            if xb {
                xm |= bit;
            }
            if zb {
                zm |= bit;
            }
        }
        (xm, zm)
    }

    pub(crate) fn y_count(&self) -> u32 {
        popcount(self.x.iter().zip(&self.z).map(|(a, b)| a & b))
    }
}

impl Mul for &PauliTerm {
    type Output = PauliTerm;

    /// Panics on width mismatch; use [`PauliTerm::multiply`] for a fallible product.
    fn mul(self, rhs: &PauliTerm) -> PauliTerm {
        self.multiply(rhs)
            .expect("Pauli product of different widths")
    }
}

fn phase_prefix(q: u8) -> &'static str {
    match q & 3 {
        0 => "+",
        1 => "+i",
        2 => "-",
        _ => "-i",
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(phase_prefix(self.phase))?;
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (1, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s)
        };
        if rest.is_empty() {
            return Err(Error::Parse(format!("Pauli term {s:?} has no letters")));
        }
        let letters = rest
            .chars()
            .map(|c| match c {
                'I' | 'X' | 'Y' | 'Z' => Ok(Letter::from_char(c).unwrap()),
                _ => Err(Error::Parse(format!("bad Pauli letter {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliTerm::from_letters(phase, &letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliTerm {
        s.parse().unwrap()
    }

    #[test]
    fn single_site_table() {
        assert_eq!(&p("X") * &p("Y"), p("+iZ"));
        assert_eq!(&p("Y") * &p("Z"), p("+iX"));
        assert_eq!(&p("Z") * &p("X"), p("+iY"));
        assert_eq!(&p("Y") * &p("X"), p("-iZ"));
        assert_eq!(&p("Z") * &p("Y"), p("-iX"));
        assert_eq!(&p("X") * &p("Z"), p("-iY"));
        for s in ["X", "Y", "Z", "I"] {
            assert_eq!(&p(s) * &p(s), p("I"));
        }
    }

    #[test]
    fn ternary_generator_product() {
        assert_eq!(&p("+iXXII") * &p("+iXYII"), p("-iIZII"));
    }

    #[test]
    fn generator_squares_to_minus_one() {
        let g = p("+iXZY");
        assert_eq!(&g * &g, p("-III"));
    }

    #[test]
    fn commutation() {
        assert!(p("X").anticommutes(&p("Y")).unwrap());
        assert!(p("+iXZI").anticommutes(&p("+iYIZ")).unwrap());
        let a = p("+iXYZ");
        assert!(!a.anticommutes(&a).unwrap());
        assert!(!p("XX").anticommutes(&p("YY")).unwrap());
    }

    #[test]
    fn weights() {
        assert_eq!(p("IIII").weight(), 0);
        assert_eq!(
            PauliTerm::from_sparse(13, 1, &[(0, Letter::X), (1, Letter::X), (4, Letter::X)])
                .weight(),
            3
        );
    }

    #[test]
    fn width_mismatch_is_an_error() {
        assert!(matches!(
            p("XX").multiply(&p("X")),
            Err(Error::WidthMismatch { .. })
        ));
        assert!(p("XX").anticommutes(&p("X")).is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["+iXXII", "-YZ", "+I", "-iZZZ"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XY").to_string(), "+XY");
        assert_eq!(p("iXY").to_string(), "+iXY");
        assert!("+i".parse::<PauliTerm>().is_err());
        assert!("+XQ".parse::<PauliTerm>().is_err());
    }

    #[test]
    fn wide_terms_cross_word_boundary() {
        let mut a = PauliTerm::identity(130);
        a.set_letter(63, Letter::X);
        a.set_letter(64, Letter::Y);
        a.set_letter(129, Letter::Z);
        let mut b = PauliTerm::identity(130);
        b.set_letter(64, Letter::Z);
        assert_eq!(a.support(), vec![63, 64, 129]);
        let c = &a * &b;
        assert_eq!(c.letter(64), Letter::X);
        assert_eq!(c.phase(), 1);
        assert!(a.anticommutes(&b).unwrap());
    }

    #[test]
    fn prepend_and_dagger() {
        assert_eq!(p("+iXY").prepend(Letter::Z), p("+iZXY"));
        assert_eq!(p("+iXY").dagger(), p("-iXY"));
    }
}
