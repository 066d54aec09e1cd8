//! Cycle strings built from the two inversion elements
//!
//! ```text
//! A = (απ)_{+x} at the weak (matching) amplitude
//! B = (απ)_{−x} at the strong amplitude
//! ```
//!
//! and the named permutations and supercycles
//!
//! ```text
//! C1 = AABB   C2 = ABBA   C3 = BBAA
//! S1 = C2     S2 = C1 C2  S3 = C1 C2 C3
//! ```
//!
//! The flip angles carry the global α so that `ABBA` is exactly one cSLIC
//! element of duration 1/J.

use std::f64::consts::PI;

use super::{require_positive, Nominal, PulseSegment, Sequence};
use crate::error::{invalid, Error, Result};
use crate::system::Channel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleToken {
    A,
    B,
}

impl CycleToken {
    fn as_char(self) -> char {
        match self {
            CycleToken::A => 'A',
            CycleToken::B => 'B',
        }
    }
}

const C1: &str = "AABB";
const C2: &str = "ABBA";
const C3: &str = "BBAA";

fn named(kind: char, digit: char) -> Option<String> {
    let s = match (kind, digit) {
        ('C', '1') => C1.to_owned(),
        ('C', '2') => C2.to_owned(),
        ('C', '3') => C3.to_owned(),
        ('S', '1') => C2.to_owned(),
        ('S', '2') => [C1, C2].concat(),
        ('S', '3') => [C1, C2, C3].concat(),
        _ => return None,
    };
    Some(s)
}

fn tokenize(text: &str) -> Result<Vec<CycleToken>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((pos, ch)) = chars.next() {
        match ch {
            c if c.is_whitespace() => {}
            'A' => out.push(CycleToken::A),
            'B' => out.push(CycleToken::B),
            'C' | 'S' => {
                let digit = chars.next();
                let expansion = digit.and_then(|(_, d)| named(ch, d));
                match expansion {
                    Some(e) => out.extend(e.chars().map(|c| if c == 'A' { CycleToken::A } else { CycleToken::B })),
                    None => {
                        return Err(Error::Parse {
                            offset: pos,
                            message: format!("'{ch}' must be followed by 1, 2 or 3"),
                        })
                    }
                }
            }
            other => {
                return Err(Error::Parse { offset: pos, message: format!("unexpected '{other}'") });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Parse { offset: 0, message: "empty cycle".into() });
    }
    Ok(out)
}

/// Expands named cycles into a plain `A`/`B` string.
pub fn expand_cycle(text: &str) -> Result<String> {
    Ok(tokenize(text)?.into_iter().map(CycleToken::as_char).collect())
}

/// One segment per `A`/`B` element after expansion.
pub fn parse_cycle(text: &str, weak_nut_hz: f64, strong_nut_hz: f64, alpha: f64, channel: &Channel) -> Result<Sequence> {
    let tokens = tokenize(text)?;
    require_positive("weak amplitude", weak_nut_hz)?;
    require_positive("strong amplitude", strong_nut_hz)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    // απ flip: ν·τ = α/2
    let a = PulseSegment::new(channel.clone(), weak_nut_hz, 0.0, alpha / (2.0 * weak_nut_hz))?;
    let b = PulseSegment::new(channel.clone(), strong_nut_hz, PI, alpha / (2.0 * strong_nut_hz))?;
    let segments = tokens
        .iter()
        .map(|t| match t {
            CycleToken::A => a.clone(),
            CycleToken::B => b.clone(),
        })
        .collect();
    let expansion = tokens.iter().map(|t| t.as_char()).collect();
    Sequence::new(
        format!("cycle:{}", text.split_whitespace().collect::<String>()),
        Nominal::Cycle { weak_nut_hz, strong_nut_hz, alpha, expansion, repeats: 1 },
        segments,
    )
}

/// Writes a cycle-built sequence back as its expanded `A`/`B` string.
///
/// Segments that are integer multiples of an element (such as the merged
/// central `BB` of a cSLIC element) are split back into elements, so both
/// `parse_cycle` and `build_cslic` output serialize.
pub fn serialize_sequence(seq: &Sequence) -> Result<String> {
    if seq.is_empty() {
        return Err(invalid("cannot serialize an empty sequence"));
    }
    let (weak, strong, alpha) = match &seq.nominal {
        Nominal::Cycle { weak_nut_hz, strong_nut_hz, alpha, .. } => (*weak_nut_hz, *strong_nut_hz, *alpha),
        Nominal::Cslic { params } => (params.j_hz, params.strong_nut_hz, params.alpha),
        _ => return Err(invalid(format!("sequence '{}' is not built from A/B elements", seq.name))),
    };
    let unit_a = alpha / (2.0 * weak);
    let unit_b = alpha / (2.0 * strong);
    let mut out = String::new();
    for (i, s) in seq.segments().iter().enumerate() {
        let (token, unit) = if s.nut_hz == weak && s.phase_rad == 0.0 {
            ('A', unit_a)
        } else if s.nut_hz == strong && s.phase_rad == PI {
            ('B', unit_b)
        } else {
            return Err(invalid(format!("segment {i} is neither an A nor a B element")));
        };
        let m = s.duration_s / unit;
        let count = m.round();
        if count < 1.0 || (m - count).abs() > 1e-9 || s.envelope.is_some() {
            return Err(invalid(format!("segment {i} is not a whole number of {token} elements")));
        }
        for _ in 0..count as usize {
            out.push(token);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::{build_cslic, CslicParams};

    fn h() -> Channel {
        Channel::from("H")
    }

    fn strong(j: f64, alpha: f64) -> f64 {
        alpha * j / (1.0 - alpha)
    }

    #[test]
    fn abba_is_one_j_period() {
        let s = parse_cycle("ABBA", 15.0, strong(15.0, 0.99), 0.99, &h()).unwrap();
        assert_eq!(s.len(), 4);
        assert!((s.total_duration() - 1.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn supercycle_expansions() {
        assert_eq!(expand_cycle("S1").unwrap(), "ABBA");
        assert_eq!(expand_cycle("S2").unwrap(), "AABBABBA");
        assert_eq!(expand_cycle("S3").unwrap(), "AABBABBABBAA");
        assert_eq!(expand_cycle(" C3 A\tB ").unwrap(), "BBAAAB");
        let s = parse_cycle("S3", 100.0, strong(100.0, 0.99), 0.99, &h()).unwrap();
        assert_eq!(s.len(), 12);
    }

    #[test]
    fn supercycle_durations() {
        let j = 100.0;
        let st = strong(j, 0.99);
        let s2 = parse_cycle("S2", j, st, 0.99, &h()).unwrap();
        let s3 = parse_cycle("S3", j, st, 0.99, &h()).unwrap();
        assert!((s2.total_duration() - 2.0 / j).abs() < 1e-12);
        assert!((s3.total_duration() - 3.0 / j).abs() < 1e-12);
    }

    #[test]
    fn parse_errors_report_offset() {
        match parse_cycle("AX", 15.0, 100.0, 0.9, &h()) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("unexpected {other:?}"),
        }
        match expand_cycle("AB C4") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
        match expand_cycle("S") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(expand_cycle("   "), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(expand_cycle(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn abba_matches_cslic_element() {
        let p = CslicParams::new(15.0, 0.99, 1).unwrap();
        let built = build_cslic(&p, &h()).unwrap();
        let parsed = parse_cycle("ABBA", 15.0, p.strong_nut_hz, 0.99, &h()).unwrap();
        assert_eq!(parsed.coalesced().segments(), built.coalesced().segments());
    }

    #[test]
    fn serialize_round_trips() {
        let st = strong(15.0, 0.99);
        for text in ["ABBA", "S2", "S3 C1"] {
            let seq = parse_cycle(text, 15.0, st, 0.99, &h()).unwrap();
            let ser = serialize_sequence(&seq).unwrap();
            let back = parse_cycle(&ser, 15.0, st, 0.99, &h()).unwrap();
            assert_eq!(back.segments(), seq.segments());
        }
        let p = CslicParams::new(15.0, 0.99, 2).unwrap();
        assert_eq!(serialize_sequence(&build_cslic(&p, &h()).unwrap()).unwrap(), "ABBAABBA");
    }

    #[test]
    fn serialize_rejects_empty_and_foreign() {
        assert!(serialize_sequence(&Sequence::empty("e")).is_err());
        let slic = crate::pulse::build_slic(15.0, 0.3, 0.0, &h()).unwrap();
        assert!(serialize_sequence(&slic).is_err());
    }
}
