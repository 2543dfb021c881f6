use crate::error::ParseError;

use super::PlanarDiagram;

const FACE_HEADER: &str = "unbounded_face:";

/// Parses a PD code. See `docs/pd-format.md` for the grammar.
///
/// Crossings keep their textual order as the crossing numbering.
pub fn parse_pd(text: &str) -> Result<PlanarDiagram, ParseError> {
    let mut crossings: Vec<[u32; 4]> = Vec::new();
    let mut circles: Vec<u32> = Vec::new();
    let mut face: Option<usize> = None;

    let mut line_start = 0;
    for line in text.split_inclusive('\n') {
        let offset = line_start;
        line_start += line.len();
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix(FACE_HEADER) {
            let value = rest.trim();
            let parsed = value
                .parse::<usize>()
                .ok()
                .filter(|_| value.bytes().all(|b| b.is_ascii_digit()));
            face = Some(parsed.ok_or_else(|| ParseError::MalformedHeader(trimmed.to_string()))?);
            continue;
        }
        for (start, token) in tokens(line) {
            match parse_token(token) {
                Some(Token::Crossing(q)) => crossings.push(q),
                Some(Token::Circle(c)) => circles.push(c),
                None => {
                    return Err(ParseError::MalformedToken {
                        token: token.to_string(),
                        offset: offset + start,
                    })
                }
            }
        }
    }
    if crossings.iter().flatten().chain(&circles).any(|&a| a == 0) {
        return Err(ParseError::ZeroLabel);
    }
    let diagram = PlanarDiagram::from_labels(&crossings, &circles)?;
    Ok(match face {
        Some(f) => diagram.with_marked_face(f)?,
        None => diagram,
    })
}

enum Token {
    Crossing([u32; 4]),
    Circle(u32),
}

fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut consumed = 0;
    std::iter::from_fn(move || {
        let skip = rest.len() - rest.trim_start().len();
        consumed += skip;
        rest = &rest[skip..];
        if rest.is_empty() {
            return None;
        }
        let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let token = &rest[..len];
        let start = consumed;
        consumed += len;
        rest = &rest[len..];
        Some((start, token))
    })
}

fn parse_token(token: &str) -> Option<Token> {
    let (kind, inner) = token.split_at_checked(2)?;
    let inner = inner.strip_suffix(')')?;
    let numbers: Vec<u32> = inner
        .split(',')
        .map(|n| {
            if n.is_empty() || !n.bytes().all(|b| b.is_ascii_digit()) {
                None
            } else {
                n.parse().ok()
            }
        })
        .collect::<Option<_>>()?;
    match (kind, numbers.as_slice()) {
        ("X(", &[a, b, c, d]) => Some(Token::Crossing([a, b, c, d])),
        ("O(", &[a]) => Some(Token::Circle(a)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DiagramError;

    #[test]
    fn smallest_closed_diagram() {
        let d = parse_pd("X(1,2,2,1)").unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.arc_count(), 2);
    }

    #[test]
    fn trefoil_keeps_textual_order() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.labelled_crossings()[1], [3, 6, 4, 1]);
    }

    #[test]
    fn arity_violation_is_malformed() {
        let err = parse_pd("X(1,2,3)").unwrap_err();
        assert_eq!(
            err,
            ParseError::MalformedToken {
                token: "X(1,2,3)".into(),
                offset: 0
            }
        );
    }

    #[test]
    fn reports_offsets() {
        match parse_pd("X(1,2,2,1)\n  X(3,a,4,4)") {
            Err(ParseError::MalformedToken { offset, .. }) => assert_eq!(offset, 13),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tokens() {
        for bad in ["X(1,2,2,1", "Y(1,2,2,1)", "X(1,,2,2)", "X(-1,2,2,1)", "X(1, 2,2,1)", "O()", "O(1,2)"] {
            assert!(parse_pd(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn arc_multiplicity() {
        assert_eq!(
            parse_pd("X(1,2,3,1)").unwrap_err(),
            ParseError::Diagram(DiagramError::ArcMultiplicity { label: 2, count: 1 })
        );
    }

    #[test]
    fn headers_circles_and_comments() {
        let d = parse_pd("# a kink and a circle\nunbounded_face: 1\nX(1,2,2,1) O(7)\n").unwrap();
        assert_eq!(d.marked_face(), Some(1));
        assert_eq!(d.free_circle_labels(), vec![7]);
        assert!(matches!(parse_pd("unbounded_face: x\nO(1)"), Err(ParseError::MalformedHeader(_))));
        assert!(matches!(
            parse_pd("unbounded_face: 5\nX(1,2,2,1)"),
            Err(ParseError::Diagram(DiagramError::FaceOutOfRange { .. }))
        ));
    }

    #[test]
    fn zero_label() {
        assert_eq!(parse_pd("O(0)").unwrap_err(), ParseError::ZeroLabel);
    }
}
