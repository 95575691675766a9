//! Compact structure groups.
//!
//! Three realizations share one runtime interface: cyclic groups `Z_n` and
//! small symmetric groups `S_n` (exact, enumerable) and `SU(2)` as unit
//! quaternions compared within a tolerance. Finite groups exist so that every
//! functorial identity can be checked without floating-point slack.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Largest `n` accepted for `symmetric(n)`.
pub const MAX_SYMMETRIC: usize = 6;

/// Default equality tolerance for `su2` elements.
pub const DEFAULT_SU2_TOLERANCE: f64 = 1e-8;

const MAX_SU2_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic(u32),
    Symmetric(u8),
    Su2,
}

/// Names a structure group together with its equality tolerance.
///
/// The tolerance only matters for `su2`; finite kinds always carry `0.0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupDescriptor {
    kind: GroupKind,
    tolerance: f64,
}

impl GroupDescriptor {
    pub fn cyclic(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDescriptor("cyclic:0".into()));
        }
        Ok(Self {
            kind: GroupKind::Cyclic(n),
            tolerance: 0.0,
        })
    }

    pub fn symmetric(n: u8) -> Result<Self> {
        if n == 0 || n as usize > MAX_SYMMETRIC {
            return Err(Error::InvalidDescriptor(format!("symmetric:{n}")));
        }
        Ok(Self {
            kind: GroupKind::Symmetric(n),
            tolerance: 0.0,
        })
    }

    pub fn su2() -> Self {
        Self {
            kind: GroupKind::Su2,
            tolerance: DEFAULT_SU2_TOLERANCE,
        }
    }

    pub fn su2_with_tolerance(tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance <= MAX_SU2_TOLERANCE) {
            return Err(Error::InvalidDescriptor(format!("su2:{tolerance}")));
        }
        Ok(Self {
            kind: GroupKind::Su2,
            tolerance,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.kind, GroupKind::Su2)
    }

    /// Number of elements, or `None` for `su2`.
    pub fn order(&self) -> Option<u64> {
        match self.kind {
            GroupKind::Cyclic(n) => Some(n as u64),
            GroupKind::Symmetric(n) => Some((1..=n as u64).product()),
            GroupKind::Su2 => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        let payload = match self.kind {
            GroupKind::Cyclic(_) => Payload::Residue(0),
            GroupKind::Symmetric(_) => Payload::Permutation(identity_permutation()),
            GroupKind::Su2 => Payload::Quaternion([1.0, 0.0, 0.0, 0.0]),
        };
        GroupElement {
            descriptor: *self,
            payload,
        }
    }

    /// All elements of a finite group in a fixed order (residues ascending,
    /// permutations lexicographic). `None` for `su2`.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        match self.kind {
            GroupKind::Cyclic(n) => Some(
                (0..n)
                    .map(|k| GroupElement {
                        descriptor: *self,
                        payload: Payload::Residue(k),
                    })
                    .collect(),
            ),
            GroupKind::Symmetric(n) => {
                let n = n as usize;
                let mut current = identity_permutation();
                let mut out = Vec::new();
                loop {
                    out.push(GroupElement {
                        descriptor: *self,
                        payload: Payload::Permutation(current),
                    });
                    if !next_permutation(&mut current[..n]) {
                        break;
                    }
                }
                Some(out)
            }
            GroupKind::Su2 => None,
        }
    }

    /// Draws from the normalized Haar measure.
    ///
    /// Finite groups are sampled uniformly; `su2` normalizes four independent
    /// standard Gaussians, which is uniform on the unit 3-sphere.
    pub fn haar_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let payload = match self.kind {
            GroupKind::Cyclic(n) => Payload::Residue(rng.random_range(0..n)),
            GroupKind::Symmetric(n) => {
                let mut p = identity_permutation();
                // Fisher-Yates on the first n slots.
                for i in (1..n as usize).rev() {
                    let j = rng.random_range(0..=i);
                    p.swap(i, j);
                }
                Payload::Permutation(p)
            }
            GroupKind::Su2 => loop {
                let q: [f64; 4] = [
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                ];
                let norm = norm4(&q);
                if norm > 1e-12 {
                    break Payload::Quaternion(q.map(|c| c / norm));
                }
            },
        };
        GroupElement {
            descriptor: *self,
            payload,
        }
    }

    pub fn from_residue(&self, k: u32) -> Result<GroupElement> {
        match self.kind {
            GroupKind::Cyclic(n) if k < n => Ok(GroupElement {
                descriptor: *self,
                payload: Payload::Residue(k),
            }),
            _ => Err(self.bad_element(&k.to_string(), "residue out of range or wrong group")),
        }
    }

    pub fn from_permutation(&self, images: &[u8]) -> Result<GroupElement> {
        let text = format_permutation(images);
        let GroupKind::Symmetric(n) = self.kind else {
            return Err(self.bad_element(&text, "not a symmetric group"));
        };
        if images.len() != n as usize {
            return Err(self.bad_element(&text, "wrong length"));
        }
        let mut seen = [false; MAX_SYMMETRIC];
        for &i in images {
            if i as usize >= images.len() || seen[i as usize] {
                return Err(self.bad_element(&text, "not a bijection"));
            }
            seen[i as usize] = true;
        }
        let mut p = identity_permutation();
        p[..images.len()].copy_from_slice(images);
        Ok(GroupElement {
            descriptor: *self,
            payload: Payload::Permutation(p),
        })
    }

    /// Builds an `su2` element; the input must be unit within tolerance and
    /// is renormalized.
    pub fn from_quaternion(&self, q: [f64; 4]) -> Result<GroupElement> {
        let text = format_quaternion(&q);
        if self.kind != GroupKind::Su2 {
            return Err(self.bad_element(&text, "not su2"));
        }
        let norm = norm4(&q);
        if !norm.is_finite() || (norm - 1.0).abs() > self.tolerance {
            return Err(self.bad_element(&text, "quaternion is not unit within tolerance"));
        }
        // already-unit input is kept bit-exact so serialization round-trips
        let q = if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
            q
        } else {
            q.map(|c| c / norm)
        };
        Ok(GroupElement {
            descriptor: *self,
            payload: Payload::Quaternion(q),
        })
    }

    /// `exp` of the pure quaternion `(0, v)`: `(cos|v|, sin|v| v/|v|)`.
    pub fn su2_exp(&self, v: [f64; 3]) -> Result<GroupElement> {
        if self.kind != GroupKind::Su2 {
            return Err(Error::UnsupportedGroup {
                descriptor: self.to_string(),
                operation: "quaternion exponential".into(),
            });
        }
        let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        // sin(a)/a, with the series near zero
        let sinc = if angle < 1e-8 {
            1.0 - angle * angle / 6.0
        } else {
            angle.sin() / angle
        };
        let q = [angle.cos(), sinc * v[0], sinc * v[1], sinc * v[2]];
        let norm = norm4(&q);
        Ok(GroupElement {
            descriptor: *self,
            payload: Payload::Quaternion(q.map(|c| c / norm)),
        })
    }

    /// Parses the serialized form of an element of this group.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let trimmed = text.trim();
        match self.kind {
            GroupKind::Cyclic(_) => {
                let k: u32 = trimmed
                    .parse()
                    .map_err(|_| self.bad_element(trimmed, "expected a nonnegative integer"))?;
                self.from_residue(k)
            }
            GroupKind::Symmetric(_) => {
                let inner = trimmed
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| self.bad_element(trimmed, "expected `[i,j,...]`"))?;
                let images = inner
                    .split(',')
                    .map(|s| s.trim())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<u8>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| self.bad_element(trimmed, "expected integers"))?;
                self.from_permutation(&images)
            }
            GroupKind::Su2 => {
                let parts: Vec<&str> = trimmed
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .collect();
                if parts.len() != 4 {
                    return Err(self.bad_element(trimmed, "expected 4 reals"));
                }
                let mut q = [0.0; 4];
                for (slot, part) in q.iter_mut().zip(&parts) {
                    *slot = part
                        .parse()
                        .map_err(|_| self.bad_element(trimmed, "expected 4 reals"))?;
                }
                self.from_quaternion(q)
            }
        }
    }

    fn bad_element(&self, text: &str, reason: &str) -> Error {
        Error::InvalidElement {
            descriptor: self.to_string(),
            text: text.to_string(),
            reason: reason.to_string(),
        }
    }

    pub(crate) fn check_same(&self, other: &GroupDescriptor) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::IncompatibleGroup {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupKind::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupKind::Su2 if self.tolerance == DEFAULT_SU2_TOLERANCE => write!(f, "su2"),
            GroupKind::Su2 => write!(f, "su2:{:e}", self.tolerance),
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidDescriptor(s.to_string());
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        match (name, arg) {
            ("cyclic", Some(n)) => Self::cyclic(n.parse().map_err(|_| bad())?),
            ("symmetric", Some(n)) => Self::symmetric(n.parse().map_err(|_| bad())?),
            ("su2", None) => Ok(Self::su2()),
            ("su2", Some(t)) => Self::su2_with_tolerance(t.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Payload {
    Residue(u32),
    Permutation([u8; MAX_SYMMETRIC]),
    Quaternion([f64; 4]),
}

/// An element of the group named by its descriptor.
#[derive(Debug, Clone, Copy)]
pub struct GroupElement {
    descriptor: GroupDescriptor,
    payload: Payload,
}

impl GroupElement {
    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn residue(&self) -> Option<u32> {
        match self.payload {
            Payload::Residue(k) => Some(k),
            _ => None,
        }
    }

    pub fn permutation(&self) -> Option<&[u8]> {
        match (&self.payload, self.descriptor.kind) {
            (Payload::Permutation(p), GroupKind::Symmetric(n)) => Some(&p[..n as usize]),
            _ => None,
        }
    }

    pub fn quaternion(&self) -> Option<[f64; 4]> {
        match self.payload {
            Payload::Quaternion(q) => Some(q),
            _ => None,
        }
    }

    /// Group product `self · other`. Permutations compose right to left:
    /// `(a·b)(i) = a(b(i))`.
    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        self.descriptor.check_same(&other.descriptor)?;
        let payload = match (self.payload, other.payload) {
            (Payload::Residue(a), Payload::Residue(b)) => {
                let GroupKind::Cyclic(n) = self.descriptor.kind else {
                    unreachable!()
                };
                Payload::Residue(((a as u64 + b as u64) % n as u64) as u32)
            }
            (Payload::Permutation(a), Payload::Permutation(b)) => {
                let mut p = identity_permutation();
                for (slot, &bi) in p.iter_mut().zip(b.iter()) {
                    *slot = a[bi as usize];
                }
                Payload::Permutation(p)
            }
            (Payload::Quaternion(a), Payload::Quaternion(b)) => {
                let q = hamilton(&a, &b);
                let norm = norm4(&q);
                Payload::Quaternion(q.map(|c| c / norm))
            }
            _ => unreachable!("descriptors agree"),
        };
        Ok(GroupElement {
            descriptor: self.descriptor,
            payload,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        let payload = match self.payload {
            Payload::Residue(k) => {
                let GroupKind::Cyclic(n) = self.descriptor.kind else {
                    unreachable!()
                };
                Payload::Residue((n - k) % n)
            }
            Payload::Permutation(a) => {
                let mut p = identity_permutation();
                for (i, &ai) in a.iter().enumerate() {
                    p[ai as usize] = i as u8;
                }
                Payload::Permutation(p)
            }
            Payload::Quaternion([w, x, y, z]) => Payload::Quaternion([w, -x, -y, -z]),
        };
        GroupElement {
            descriptor: self.descriptor,
            payload,
        }
    }

    /// Group equality: exact for finite kinds, component-wise within the
    /// descriptor tolerance for `su2`. `q` and `-q` are different elements.
    pub fn equal(&self, other: &GroupElement) -> Result<bool> {
        Ok(self.distance(other)? <= self.descriptor.tolerance)
    }

    /// `0` or `1` for finite kinds; largest component difference for `su2`.
    pub fn distance(&self, other: &GroupElement) -> Result<f64> {
        self.descriptor.check_same(&other.descriptor)?;
        Ok(match (self.payload, other.payload) {
            (Payload::Residue(a), Payload::Residue(b)) => (a != b) as u8 as f64,
            (Payload::Permutation(a), Payload::Permutation(b)) => (a != b) as u8 as f64,
            (Payload::Quaternion(a), Payload::Quaternion(b)) => a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
            _ => unreachable!("descriptors agree"),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.equal(&self.descriptor.identity()).unwrap_or(false)
    }

    /// Class function used for Wilson loops: `2w` on `su2`,
    /// `cos(2πk/n)` on `Z_n`, number of fixed points on `S_n`.
    pub fn trace(&self) -> f64 {
        match self.payload {
            Payload::Residue(k) => {
                let GroupKind::Cyclic(n) = self.descriptor.kind else {
                    unreachable!()
                };
                (2.0 * PI * k as f64 / n as f64).cos()
            }
            Payload::Permutation(_) => {
                let p = self.permutation().expect("symmetric payload");
                p.iter()
                    .enumerate()
                    .filter(|(i, &v)| *i == v as usize)
                    .count() as f64
            }
            Payload::Quaternion(q) => 2.0 * q[0],
        }
    }

    /// Upper bound of `|trace|` over the group.
    pub fn trace_bound(descriptor: &GroupDescriptor) -> f64 {
        match descriptor.kind {
            GroupKind::Cyclic(_) => 1.0,
            GroupKind::Symmetric(n) => n as f64,
            GroupKind::Su2 => 2.0,
        }
    }

    /// Total order on payloads, used for canonical sorting.
    pub fn cmp_payload(&self, other: &GroupElement) -> Ordering {
        match (self.payload, other.payload) {
            (Payload::Residue(a), Payload::Residue(b)) => a.cmp(&b),
            (Payload::Permutation(a), Payload::Permutation(b)) => a.cmp(&b),
            (Payload::Quaternion(a), Payload::Quaternion(b)) => a
                .iter()
                .zip(&b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal),
            (a, b) => payload_rank(&a).cmp(&payload_rank(&b)),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.payload {
            Payload::Residue(k) => write!(f, "{k}"),
            Payload::Permutation(_) => {
                f.write_str(&format_permutation(self.permutation().expect("symmetric")))
            }
            Payload::Quaternion(q) => f.write_str(&format_quaternion(&q)),
        }
    }
}

fn payload_rank(p: &Payload) -> u8 {
    match p {
        Payload::Residue(_) => 0,
        Payload::Permutation(_) => 1,
        Payload::Quaternion(_) => 2,
    }
}

fn identity_permutation() -> [u8; MAX_SYMMETRIC] {
    std::array::from_fn(|i| i as u8)
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(p: &mut [u8]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len())
        .rev()
        .find(|&j| p[j] > p[i])
        .expect("pivot");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn hamilton(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    let [aw, ax, ay, az] = *a;
    let [bw, bx, by, bz] = *b;
    [
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ]
}

fn norm4(q: &[f64; 4]) -> f64 {
    q.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn format_permutation(images: &[u8]) -> String {
    let parts: Vec<String> = images.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn format_quaternion(q: &[f64; 4]) -> String {
    let parts: Vec<String> = q.iter().map(|c| format!("{c:.16e}")).collect();
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(n: u32, k: u32) -> GroupElement {
        GroupDescriptor::cyclic(n).unwrap().from_residue(k).unwrap()
    }

    #[test]
    fn cyclic_table() {
        assert_eq!(z(3, 1).multiply(&z(3, 2)).unwrap().residue(), Some(0));
        assert_eq!(z(3, 1).inverse().residue(), Some(2));
        assert!(z(3, 2).equal(&z(3, 2)).unwrap());
        assert!(!z(3, 1).equal(&z(3, 2)).unwrap());
        assert_eq!(
            GroupDescriptor::cyclic(5).unwrap().identity().residue(),
            Some(0)
        );
    }

    #[test]
    fn identity_is_neutral_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in ["cyclic:4", "symmetric:4", "su2"] {
            let d: GroupDescriptor = d.parse().unwrap();
            let e = d.identity();
            for _ in 0..20 {
                let g = d.haar_sample(&mut rng);
                assert!(e.multiply(&g).unwrap().equal(&g).unwrap());
                assert!(g.multiply(&e).unwrap().equal(&g).unwrap());
            }
        }
    }

    #[test]
    fn symmetric_inverse_of_cycle() {
        let d = GroupDescriptor::symmetric(3).unwrap();
        let g = d.from_permutation(&[1, 2, 0]).unwrap();
        assert_eq!(g.inverse().permutation(), Some(&[2, 0, 1][..]));
        assert!(g.multiply(&g.inverse()).unwrap().is_identity());
        assert_eq!(
            GroupDescriptor::symmetric(4)
                .unwrap()
                .identity()
                .permutation(),
            Some(&[0, 1, 2, 3][..])
        );
    }

    #[test]
    fn su2_inverse_is_conjugate() {
        let d = GroupDescriptor::su2();
        let h = 0.5f64;
        let q = d.from_quaternion([h, h, -h, h]).unwrap();
        assert_eq!(q.inverse().quaternion(), Some([h, -h, h, -h]));
        assert!(q.multiply(&q.inverse()).unwrap().is_identity());
        assert_eq!(d.identity().quaternion(), Some([1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn su2_equality_tolerance_and_sign() {
        let d = GroupDescriptor::su2();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = d.haar_sample(&mut rng);
        let raw = q.quaternion().unwrap();
        let near = GroupElement {
            descriptor: d,
            payload: Payload::Quaternion(raw.map(|c| c + 1e-9)),
        };
        assert!(q.equal(&near).unwrap());
        let negated = GroupElement {
            descriptor: d,
            payload: Payload::Quaternion(raw.map(|c| -c)),
        };
        assert!(!q.equal(&negated).unwrap());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = z(3, 1);
        let b = z(4, 1);
        assert!(matches!(
            a.multiply(&b),
            Err(Error::IncompatibleGroup { .. })
        ));
        assert!(matches!(a.equal(&b), Err(Error::IncompatibleGroup { .. })));
    }

    #[test]
    fn descriptor_strings() {
        for s in ["cyclic:3", "symmetric:4", "su2"] {
            assert_eq!(s.parse::<GroupDescriptor>().unwrap().to_string(), s);
        }
        assert!("symmetric:7".parse::<GroupDescriptor>().is_err());
        assert!("cyclic:0".parse::<GroupDescriptor>().is_err());
        assert!("su2:0".parse::<GroupDescriptor>().is_err());
        assert!("su2:1e-3".parse::<GroupDescriptor>().is_err());
        assert_eq!(
            "su2:1e-9".parse::<GroupDescriptor>().unwrap().tolerance(),
            1e-9
        );
    }

    #[test]
    fn element_strings_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in ["cyclic:7", "symmetric:5", "su2"] {
            let d: GroupDescriptor = d.parse().unwrap();
            for _ in 0..10 {
                let g = d.haar_sample(&mut rng);
                let back = d.parse_element(&g.to_string()).unwrap();
                assert_eq!(g.distance(&back).unwrap(), 0.0, "{g}");
            }
        }
        let d = GroupDescriptor::symmetric(3).unwrap();
        assert!(d.parse_element("[0,0,1]").is_err());
        assert!(GroupDescriptor::su2().parse_element("0.5 0 0 0").is_err());
    }

    #[test]
    fn enumeration_sizes() {
        for n in 1..=6u8 {
            let d = GroupDescriptor::symmetric(n).unwrap();
            let all = d.elements().unwrap();
            assert_eq!(all.len() as u64, d.order().unwrap());
            for w in all.windows(2) {
                assert_eq!(w[0].cmp_payload(&w[1]), Ordering::Less);
            }
        }
        assert!(GroupDescriptor::su2().elements().is_none());
    }

    #[test]
    fn left_translation_permutes_finite_groups() {
        for d in ["cyclic:6", "symmetric:3", "symmetric:4"] {
            let d: GroupDescriptor = d.parse().unwrap();
            let all = d.elements().unwrap();
            for g in &all {
                let mut image: Vec<GroupElement> =
                    all.iter().map(|h| g.multiply(h).unwrap()).collect();
                image.sort_by(|a, b| a.cmp_payload(b));
                for (a, b) in image.iter().zip(&all) {
                    assert!(a.equal(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn haar_is_deterministic_per_seed() {
        for d in ["cyclic:5", "symmetric:4", "su2"] {
            let d: GroupDescriptor = d.parse().unwrap();
            let draw = |seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..50)
                    .map(|_| d.haar_sample(&mut rng).to_string())
                    .collect::<Vec<_>>()
            };
            assert_eq!(draw(17), draw(17));
            assert_ne!(draw(17), draw(18));
        }
    }

    #[test]
    fn cyclic_haar_frequencies() {
        // p = 1/3 exactly; sigma of the count from the binomial formula
        let d = GroupDescriptor::cyclic(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let draws = 30_000;
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            counts[d.haar_sample(&mut rng).residue().unwrap() as usize] += 1;
        }
        let p = 1.0 / 3.0;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!(
                (c as f64 - draws as f64 * p).abs() <= 3.0 * sigma,
                "{counts:?}"
            );
        }
    }

    #[test]
    fn su2_haar_component_means() {
        // every component has mean 0 and variance 1/4 on the uniform 3-sphere
        let d = GroupDescriptor::su2();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let draws = 100_000;
        let mut sums = [0.0; 4];
        let mut trace_sum = 0.0;
        for _ in 0..draws {
            let g = d.haar_sample(&mut rng);
            let q = g.quaternion().unwrap();
            assert!((norm4(&q) - 1.0).abs() < 1e-12);
            for (s, c) in sums.iter_mut().zip(q) {
                *s += c;
            }
            trace_sum += g.trace();
        }
        let sigma = (0.25 / draws as f64).sqrt();
        for s in sums {
            assert!((s / draws as f64).abs() <= 3.0 * sigma);
        }
        assert!((trace_sum / draws as f64).abs() <= 3.0 * 2.0 * sigma);
    }

    #[test]
    fn su2_exp_embeds_u1() {
        let d = GroupDescriptor::su2();
        let g = d.su2_exp([0.3, 0.0, 0.0]).unwrap();
        let q = g.quaternion().unwrap();
        assert!((q[0] - 0.3f64.cos()).abs() < 1e-15);
        assert!((q[1] - 0.3f64.sin()).abs() < 1e-15);
        assert!(d.su2_exp([0.0; 3]).unwrap().is_identity());
        assert!(GroupDescriptor::cyclic(2)
            .unwrap()
            .su2_exp([0.0; 3])
            .is_err());
    }

    #[test]
    fn traces() {
        assert_eq!(GroupDescriptor::su2().identity().trace(), 2.0);
        let d = GroupDescriptor::su2();
        assert_eq!(
            d.from_quaternion([0.0, 1.0, 0.0, 0.0]).unwrap().trace(),
            0.0
        );
        assert!((z(3, 1).trace() + 0.5).abs() < 1e-15);
        let s = GroupDescriptor::symmetric(4).unwrap();
        assert_eq!(s.from_permutation(&[1, 0, 2, 3]).unwrap().trace(), 2.0);
    }
}
