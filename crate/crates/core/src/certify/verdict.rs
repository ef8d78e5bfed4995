use super::Interval;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Copositive,
    NotCopositive,
    Inconclusive,
    TriviallyCopositive,
    TriviallyNegative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub certified: bool,
    pub t_interval: Option<Interval>,
    pub details: Vec<String>,
}

impl Verdict {
    pub fn trivial(kind: VerdictKind, detail: impl Into<String>) -> Self {
        Verdict { kind, certified: true, t_interval: None, details: vec![detail.into()] }
    }

    pub fn inconclusive(details: Vec<String>) -> Self {
        Verdict { kind: VerdictKind::Inconclusive, certified: false, t_interval: None, details }
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            VerdictKind::Copositive | VerdictKind::TriviallyCopositive => 0,
            VerdictKind::NotCopositive | VerdictKind::TriviallyNegative => 1,
            VerdictKind::Inconclusive => 2,
        }
    }
}

/// `f` is copositive iff `t* >= 1`: decide from a certified enclosure of `t*`.
pub fn verdict_from_interval(t_interval: Option<Interval>, details: Vec<String>) -> Verdict {
    match t_interval {
        Some(t) if t.lo > 1.0 => Verdict { kind: VerdictKind::Copositive, certified: true, t_interval: Some(t), details },
        Some(t) if t.hi < 1.0 => Verdict { kind: VerdictKind::NotCopositive, certified: true, t_interval: Some(t), details },
        Some(t) => {
            let mut details = details;
            details.push("certified interval contains 1".into());
            Verdict { kind: VerdictKind::Inconclusive, certified: false, t_interval: Some(t), details }
        }
        None => Verdict::inconclusive(details),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_rule() {
        let v = verdict_from_interval(Some(Interval::new(3.99, 4.01)), vec![]);
        assert_eq!((v.kind, v.certified), (VerdictKind::Copositive, true));
        let v = verdict_from_interval(Some(Interval::new(0.9999999370, 0.9999999372)), vec![]);
        assert_eq!((v.kind, v.certified), (VerdictKind::NotCopositive, true));
        let v = verdict_from_interval(Some(Interval::new(0.999999, 1.000001)), vec![]);
        assert_eq!((v.kind, v.certified), (VerdictKind::Inconclusive, false));
        assert_eq!(verdict_from_interval(None, vec![]).exit_code(), 2);
    }
}
