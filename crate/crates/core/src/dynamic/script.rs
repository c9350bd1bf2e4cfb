use std::fmt;
use std::path::Path;

use crate::{Error, Party, QubitLabel, Result};

/// A one- or two-slot operation inside a single party.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalGate {
    Cz(u8, u8),
    Zz(u8, u8, f64),
    XRot(u8, f64),
    ZRot(u8, f64),
    H(u8),
    X(u8),
    Z(u8),
    /// Exchanges two slots; either may be empty.
    Swap(u8, u8),
}

impl LocalGate {
    pub fn slots(&self) -> Vec<u8> {
        match *self {
            LocalGate::Cz(a, b) | LocalGate::Zz(a, b, _) | LocalGate::Swap(a, b) => vec![a, b],
            LocalGate::XRot(a, _) | LocalGate::ZRot(a, _) | LocalGate::H(a) | LocalGate::X(a) | LocalGate::Z(a) => {
                vec![a]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProtocolStep {
    /// Fresh `|+⟩` in an empty slot.
    Alloc(QubitLabel),
    Gate(Party, LocalGate),
    /// Z measurement; on outcome 1, Z is applied to every listed qubit.
    Measure { qubit: QubitLabel, zcorrect: Vec<QubitLabel> },
    /// One round of quantum communication.
    Send { from: QubitLabel, to: QubitLabel },
}

impl ProtocolStep {
    pub fn is_send(&self) -> bool {
        matches!(self, ProtocolStep::Send { .. })
    }
}

fn fmt_angle(a: f64) -> String {
    if a == std::f64::consts::FRAC_PI_4 {
        "pi/4".into()
    } else {
        format!("{a}")
    }
}

fn parse_angle(t: &str) -> Option<f64> {
    match t {
        "pi/4" => Some(std::f64::consts::FRAC_PI_4),
        "pi/2" => Some(std::f64::consts::FRAC_PI_2),
        "pi" => Some(std::f64::consts::PI),
        _ => t.parse().ok().filter(|a: &f64| a.is_finite()),
    }
}

impl fmt::Display for ProtocolStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtocolStep::Alloc(q) => write!(f, "alloc {} {}", q.party, q.slot),
            ProtocolStep::Gate(p, g) => match *g {
                LocalGate::Cz(a, b) => write!(f, "cz {p} {a} {b}"),
                LocalGate::Zz(a, b, t) => write!(f, "zz {p} {a} {b} {}", fmt_angle(t)),
                LocalGate::XRot(a, t) => write!(f, "xrot {p} {a} {}", fmt_angle(t)),
                LocalGate::ZRot(a, t) => write!(f, "zrot {p} {a} {}", fmt_angle(t)),
                LocalGate::H(a) => write!(f, "h {p} {a}"),
                LocalGate::X(a) => write!(f, "x {p} {a}"),
                LocalGate::Z(a) => write!(f, "z {p} {a}"),
                LocalGate::Swap(a, b) => write!(f, "swap {p} {a} {b}"),
            },
            ProtocolStep::Measure { qubit, zcorrect } => {
                write!(f, "measure {} {}", qubit.party, qubit.slot)?;
                if !zcorrect.is_empty() {
                    write!(f, " zcorrect")?;
                    for q in zcorrect {
                        write!(f, " {q}")?;
                    }
                }
                Ok(())
            }
            ProtocolStep::Send { from, to } => {
                write!(f, "send {} {} {} {}", from.party, from.slot, to.party, to.slot)
            }
        }
    }
}

/// An ordered list of steps with a line-oriented text form.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProtocolScript {
    pub steps: Vec<ProtocolStep>,
}

impl ProtocolScript {
    pub fn new(steps: Vec<ProtocolStep>) -> Self {
        Self { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn sends(&self) -> usize {
        self.steps.iter().filter(|s| s.is_send()).count()
    }

    pub fn count_gates(&self, pred: impl Fn(&LocalGate) -> bool) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, ProtocolStep::Gate(_, g) if pred(g)))
            .count()
    }

    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// One step per line; blank lines and `#` comments are ignored.
    ///
    /// ```text
    /// alloc v1 0
    /// cz v1 0 1
    /// zz v1 0 1 pi/4
    /// xrot v1 1 0.3
    /// measure v1 1 zcorrect v2:0 v3:0
    /// send v1 1 v2 0
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            steps.push(parse_step(line).map_err(|msg| Error::Parse { line: i + 1, msg })?);
        }
        Ok(Self { steps })
    }
}

fn parse_step(line: &str) -> std::result::Result<ProtocolStep, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let party = |t: &str| t.parse::<Party>().map_err(|e| e.to_string());
    let slot = |t: &str| t.parse::<u8>().map_err(|_| format!("bad slot `{t}`"));
    let angle = |t: &str| parse_angle(t).ok_or_else(|| format!("bad angle `{t}`"));
    let arity = |n: usize| {
        if toks.len() == n {
            Ok(())
        } else {
            Err(format!("`{}` takes {} arguments, found {}", toks[0], n - 1, toks.len() - 1))
        }
    };
    let op = toks[0];
    match op {
        "alloc" => {
            arity(3)?;
            Ok(ProtocolStep::Alloc(QubitLabel::new(party(toks[1])?, slot(toks[2])?)))
        }
        "cz" | "zz" | "swap" => {
            if toks.len() == 5 && toks[3].starts_with('v') && op != "zz" {
                return Err(format!("`{op}` acts within one party; {} and {} differ", toks[1], toks[3]));
            }
            let n = if op == "zz" { 5 } else { 4 };
            arity(n)?;
            let (p, a, b) = (party(toks[1])?, slot(toks[2])?, slot(toks[3])?);
            if a == b {
                return Err(format!("`{op}` needs two distinct slots"));
            }
            let g = match op {
                "cz" => LocalGate::Cz(a, b),
                "swap" => LocalGate::Swap(a, b),
                _ => LocalGate::Zz(a, b, angle(toks[4])?),
            };
            Ok(ProtocolStep::Gate(p, g))
        }
        "xrot" | "zrot" => {
            arity(4)?;
            let (p, a, t) = (party(toks[1])?, slot(toks[2])?, angle(toks[3])?);
            let g = if op == "xrot" { LocalGate::XRot(a, t) } else { LocalGate::ZRot(a, t) };
            Ok(ProtocolStep::Gate(p, g))
        }
        "h" | "x" | "z" => {
            arity(3)?;
            let (p, a) = (party(toks[1])?, slot(toks[2])?);
            let g = match op {
                "h" => LocalGate::H(a),
                "x" => LocalGate::X(a),
                _ => LocalGate::Z(a),
            };
            Ok(ProtocolStep::Gate(p, g))
        }
        "measure" => {
            if toks.len() < 3 {
                return Err("`measure` takes a party and a slot".into());
            }
            let qubit = QubitLabel::new(party(toks[1])?, slot(toks[2])?);
            let zcorrect = match toks.get(3) {
                None => Vec::new(),
                Some(&"zcorrect") => toks[4..]
                    .iter()
                    .map(|t| t.parse::<QubitLabel>().map_err(|e| e.to_string()))
                    .collect::<std::result::Result<_, _>>()?,
                Some(t) => return Err(format!("expected `zcorrect`, found `{t}`")),
            };
            Ok(ProtocolStep::Measure { qubit, zcorrect })
        }
        "send" => {
            arity(5)?;
            Ok(ProtocolStep::Send {
                from: QubitLabel::new(party(toks[1])?, slot(toks[2])?),
                to: QubitLabel::new(party(toks[3])?, slot(toks[4])?),
            })
        }
        _ => Err(format!("unknown step `{op}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "alloc v1 0\nalloc v1 1\ncz v1 0 1\nzz v1 0 1 pi/4\nxrot v1 1 0.3\nzrot v2 0 1.5\n\
                    h v1 0\nx v1 1\nz v1 0\nswap v1 0 1\nmeasure v1 1 zcorrect v2:0 v3:0\nmeasure v1 0\n\
                    send v1 1 v2 0\n";
        let s = ProtocolScript::parse(text).unwrap();
        assert_eq!(s.len(), 13);
        assert_eq!(s.to_text(), text);
        assert_eq!(s.sends(), 1);
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = ProtocolScript::parse("# setup\n\nalloc v1 0  # first\n").unwrap();
        assert_eq!(s.steps, vec![ProtocolStep::Alloc(QubitLabel::new(Party::v(1), 0))]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("alloc v1 0\nfoo v1\n", 2),
            ("alloc v1\n", 1),
            ("alloc v1 0\n\ncz v1 0 v2 1\n", 3),
            ("xrot v1 0 nan\n", 1),
            ("measure v1 0 fix v2:0\n", 1),
            ("cz v1 0 0\n", 1),
            ("send v1 0 v2\n", 1),
        ];
        for (text, line) in cases {
            match ProtocolScript::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
