//! Structured verification reports.
//!
//! Every pipeline returns a [`Report`]: a list of named checks with pass,
//! fail or skipped status plus optional text artifacts (generator lists,
//! computed maps). Reports carry no timing or host information, so a run
//! with the same seed, field and mode reproduces the same report bit for
//! bit. Callers that want wall-clock data attach a [`Progress`] observer.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Artifact {
    pub name: String,
    pub content: String,
    /// FNV-1a 128-bit digest of the content, hex.
    pub digest: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub title: String,
    pub seed: u64,
    /// Field description: `QQ` or `F<p>`.
    pub field: String,
    pub mode: Option<String>,
    pub items: Vec<CheckItem>,
    pub artifacts: Vec<Artifact>,
}

impl Report {
    pub fn new(title: &str, seed: u64, field: &str) -> Self {
        Report {
            title: title.to_string(),
            seed,
            field: field.to_string(),
            mode: None,
            items: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn with_mode(mut self, mode: &str) -> Self {
        self.mode = Some(mode.to_string());
        self
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: String) {
        self.items.push(CheckItem {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        });
    }

    pub fn pass(&mut self, name: &str, detail: String) {
        self.check(name, true, detail);
    }

    pub fn fail(&mut self, name: &str, detail: String) {
        self.check(name, false, detail);
    }

    pub fn skip(&mut self, name: &str, detail: String) {
        self.items.push(CheckItem {
            name: name.to_string(),
            status: Status::Skipped,
            detail,
        });
    }

    pub fn artifact(&mut self, name: &str, content: String) {
        let digest = fnv128_hex(content.as_bytes());
        self.artifacts.push(Artifact {
            name: name.to_string(),
            content,
            digest,
        });
    }

    /// True when no check failed (skipped checks do not count against).
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| i.status == Status::Fail)
    }

    /// Merge another report's checks and artifacts, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut item in other.items {
            item.name = alloc::format!("{prefix}.{}", item.name);
            self.items.push(item);
        }
        for mut a in other.artifacts {
            a.name = alloc::format!("{prefix}.{}", a.name);
            self.artifacts.push(a);
        }
    }
}

/// FNV-1a, 128-bit variant; stable content fingerprint with no dependencies.
pub fn fnv128_hex(data: &[u8]) -> String {
    const OFFSET: u128 = 0x6c62272e07bb014262b821756295c58d;
    const PRIME: u128 = 0x0000000001000000000000000000013b;
    let mut h = OFFSET;
    for &b in data {
        h ^= b as u128;
        h = h.wrapping_mul(PRIME);
    }
    let mut s = String::with_capacity(32);
    for shift in (0..16).rev() {
        let byte = ((h >> (shift * 8)) & 0xff) as u8;
        s.push_str(&alloc::format!("{byte:02x}"));
    }
    s
}

/// Observer for long pipelines. Implementations may record wall-clock time;
/// the core never does.
pub trait Progress {
    fn checkpoint(&mut self, label: &str);
}

/// Silent observer.
pub struct NoProgress;

impl Progress for NoProgress {
    fn checkpoint(&mut self, _label: &str) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_outcome_tracking() {
        let mut r = Report::new("demo", 1, "F101");
        r.pass("a", "ok".into());
        r.skip("b", "not requested".into());
        assert!(r.all_passed());
        r.fail("c", "bad".into());
        assert!(!r.all_passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn digest_is_stable_and_distinguishes() {
        let a = fnv128_hex(b"hello");
        let b = fnv128_hex(b"hello");
        let c = fnv128_hex(b"hellp");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 32);
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut outer = Report::new("outer", 1, "QQ");
        let mut inner = Report::new("inner", 1, "QQ");
        inner.pass("x", String::new());
        outer.absorb("sub", inner);
        assert_eq!(outer.items[0].name, "sub.x");
    }
}
