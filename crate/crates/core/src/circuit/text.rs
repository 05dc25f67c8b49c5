//! Line-oriented circuit text format.
//!
//! ```text
//! QUBITS 4
//! CLBITS 1
//! SIGN 0
//! RX 0 0.786
//! RZZ 0,1 -0.787
//! MEASURE_Z 0 -> 0
//! IF 0 X 1
//! ```
//!
//! `QUBITS` must come before any gate and `CLBITS` before any gate that
//! touches a classical bit. `SIGN c` and `POSTSELECT c b` set the role of a
//! classical bit. `#` starts a comment. Keywords are case-insensitive.

use std::fmt::Write as _;

use super::{Circuit, ClbitRole, Gate};
use crate::error::{Error, Result};

pub fn write_circuit(circuit: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "QUBITS {}", circuit.n_qubits()).unwrap();
    if circuit.n_clbits() > 0 {
        writeln!(s, "CLBITS {}", circuit.n_clbits()).unwrap();
    }
    for (c, role) in circuit.roles().iter().enumerate() {
        match role {
            ClbitRole::Plain => {}
            ClbitRole::Sign => writeln!(s, "SIGN {c}").unwrap(),
            ClbitRole::Postselect(b) => writeln!(s, "POSTSELECT {c} {}", u8::from(*b)).unwrap(),
        }
    }
    for g in circuit.gates() {
        s.push_str(&gate_line(g));
        s.push('\n');
    }
    s
}

fn gate_line(g: &Gate) -> String {
    let qubits = g
        .qubits()
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(",");
    match g {
        Gate::Conditional { clbit, gate } => format!("IF {clbit} {}", gate_line(gate)),
        Gate::Measure { clbit, .. } => format!("MEASURE_Z {qubits} -> {clbit}"),
        _ => match g.angle() {
            Some(t) => format!("{} {qubits} {t:?}", g.name()),
            None => format!("{} {qubits}", g.name()),
        },
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut pending_roles: Vec<(usize, ClbitRole)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let head = tokens[0].to_ascii_uppercase();
        match head.as_str() {
            "QUBITS" => {
                if circuit.is_some() {
                    return Err(err("QUBITS declared twice".into()));
                }
                let n = parse_count(&tokens, line_no)?;
                circuit = Some(Circuit::new(n, 0));
            }
            "CLBITS" => {
                let c = circuit
                    .as_mut()
                    .ok_or_else(|| err("CLBITS before QUBITS".into()))?;
                if c.n_clbits() > 0 || !c.is_empty() {
                    return Err(err("CLBITS must follow QUBITS directly".into()));
                }
                let m = parse_count(&tokens, line_no)?;
                if m > 64 {
                    return Err(err(format!("at most 64 classical bits, got {m}")));
                }
                for _ in 0..m {
                    c.add_clbit(ClbitRole::Plain);
                }
            }
            "SIGN" | "POSTSELECT" => {
                let role = if head == "SIGN" {
                    if tokens.len() != 2 {
                        return Err(err("expected `SIGN <clbit>`".into()));
                    }
                    ClbitRole::Sign
                } else {
                    if tokens.len() != 3 {
                        return Err(err("expected `POSTSELECT <clbit> <0|1>`".into()));
                    }
                    match tokens[2] {
                        "0" => ClbitRole::Postselect(false),
                        "1" => ClbitRole::Postselect(true),
                        other => {
                            return Err(err(format!(
                                "postselect value must be 0 or 1, got {other}"
                            )))
                        }
                    }
                };
                let clbit = parse_index(tokens[1], line_no)?;
                pending_roles.push((clbit, role));
            }
            _ => {
                let c = circuit
                    .as_mut()
                    .ok_or_else(|| err("gate before QUBITS".into()))?;
                let gate = parse_gate(&tokens, line_no)?;
                c.push(gate).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    let mut circuit = circuit.ok_or(Error::Parse {
        line: 0,
        msg: "missing QUBITS header".into(),
    })?;
    for (clbit, role) in pending_roles {
        circuit.set_role(clbit, role).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })?;
    }
    Ok(circuit)
}

fn parse_count(tokens: &[&str], line: usize) -> Result<usize> {
    if tokens.len() != 2 {
        return Err(Error::Parse {
            line,
            msg: format!("expected `{} <count>`", tokens[0]),
        });
    }
    parse_index(tokens[1], line)
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a non-negative integer, got `{tok}`"),
    })
}

fn parse_angle(tok: &str, line: usize) -> Result<f64> {
    let t: f64 = tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected an angle, got `{tok}`"),
    })?;
    if !t.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("angle must be finite, got `{tok}`"),
        });
    }
    Ok(t)
}

fn parse_gate(tokens: &[&str], line: usize) -> Result<Gate> {
    let err = |msg: String| Error::Parse { line, msg };
    let kind = tokens[0].to_ascii_uppercase();
    if kind == "IF" {
        if tokens.len() < 3 {
            return Err(err("expected `IF <clbit> <gate>`".into()));
        }
        let clbit = parse_index(tokens[1], line)?;
        let inner = parse_gate(&tokens[2..], line)?;
        return Ok(Gate::Conditional {
            clbit,
            gate: Box::new(inner),
        });
    }
    let qubits = |tok: Option<&&str>, arity: usize| -> Result<Vec<usize>> {
        let tok = tok.ok_or_else(|| err(format!("{kind} needs {arity} qubit(s)")))?;
        let qs = tok
            .split(',')
            .map(|q| parse_index(q, line))
            .collect::<Result<Vec<_>>>()?;
        if qs.len() != arity {
            return Err(err(format!(
                "{kind} takes {arity} qubit(s), got {}",
                qs.len()
            )));
        }
        Ok(qs)
    };
    let expect_len = |n: usize| -> Result<()> {
        if tokens.len() != n {
            return Err(err(format!(
                "{kind} expects {} operand token(s), got {}",
                n - 1,
                tokens.len() - 1
            )));
        }
        Ok(())
    };
    let gate = match kind.as_str() {
        "X" | "SX" | "H" | "RESET" => {
            expect_len(2)?;
            let q = qubits(tokens.get(1), 1)?[0];
            match kind.as_str() {
                "X" => Gate::X(q),
                "SX" => Gate::Sx(q),
                "H" => Gate::H(q),
                _ => Gate::Reset(q),
            }
        }
        "RX" | "RZ" => {
            expect_len(3)?;
            let q = qubits(tokens.get(1), 1)?[0];
            let t = parse_angle(tokens[2], line)?;
            if kind == "RX" {
                Gate::Rx(q, t)
            } else {
                Gate::Rz(q, t)
            }
        }
        "RZZ" | "RZX" => {
            expect_len(3)?;
            let qs = qubits(tokens.get(1), 2)?;
            let t = parse_angle(tokens[2], line)?;
            if kind == "RZZ" {
                Gate::Rzz(qs[0], qs[1], t)
            } else {
                Gate::Rzx(qs[0], qs[1], t)
            }
        }
        "CNOT" | "SWAP" => {
            expect_len(2)?;
            let qs = qubits(tokens.get(1), 2)?;
            if kind == "CNOT" {
                Gate::Cnot(qs[0], qs[1])
            } else {
                Gate::Swap(qs[0], qs[1])
            }
        }
        "MEASURE_Z" | "MEASURE" => {
            expect_len(4)?;
            let q = qubits(tokens.get(1), 1)?[0];
            if tokens[2] != "->" {
                return Err(err(format!("expected `->`, got `{}`", tokens[2])));
            }
            Gate::Measure {
                qubit: q,
                clbit: parse_index(tokens[3], line)?,
            }
        }
        other => return Err(err(format!("unknown gate kind `{other}`"))),
    };
    Ok(gate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_example() {
        let text = "QUBITS 4\nCLBITS 1\nSIGN 0\nRX 0 0.786\nrzz 0,1 -0.787 # edge\n\nMEASURE_Z 0 -> 0\nIF 0 X 1\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.n_qubits(), 4);
        assert_eq!(c.role(0), ClbitRole::Sign);
        assert_eq!(c.gates()[1], Gate::Rzz(0, 1, -0.787));
        assert_eq!(
            c.gates()[3],
            Gate::Conditional {
                clbit: 0,
                gate: Box::new(Gate::X(1))
            }
        );
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_circuit("QUBITS 2\nX 0\nRZZ 0 1.0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        assert!(parse_circuit("X 0").is_err());
        assert!(parse_circuit("").is_err());
        assert!(parse_circuit("QUBITS 2\nRX 0 nan").is_err());
        assert!(parse_circuit("QUBITS 2\nIF 0 X 1").is_err());
        assert!(parse_circuit("QUBITS 1\nCLBITS 1\nPOSTSELECT 3 1").is_err());
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        let q = 0..n;
        let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
        let angle = -10.0f64..10.0;
        prop_oneof![
            q.clone().prop_map(Gate::X),
            q.clone().prop_map(Gate::Sx),
            q.clone().prop_map(Gate::H),
            q.clone().prop_map(Gate::Reset),
            (q.clone(), angle.clone()).prop_map(|(q, t)| Gate::Rx(q, t)),
            (q.clone(), angle.clone()).prop_map(|(q, t)| Gate::Rz(q, t)),
            (pair.clone(), angle.clone()).prop_map(|((a, b), t)| Gate::Rzz(a, b, t)),
            (pair.clone(), angle).prop_map(|((a, b), t)| Gate::Rzx(a, b, t)),
            pair.clone().prop_map(|(a, b)| Gate::Cnot(a, b)),
            pair.prop_map(|(a, b)| Gate::Swap(a, b)),
        ]
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(gates in prop::collection::vec(arb_gate(3), 0..20), cond in 0..3usize) {
            let mut c = Circuit::new(3, 1);
            c.set_role(0, ClbitRole::Postselect(true)).unwrap();
            c.push(Gate::Measure { qubit: 0, clbit: 0 }).unwrap();
            for (i, g) in gates.into_iter().enumerate() {
                if i % 4 == cond && g.is_unitary() {
                    c.push(Gate::Conditional { clbit: 0, gate: Box::new(g) }).unwrap();
                } else {
                    c.push(g).unwrap();
                }
            }
            let back = parse_circuit(&write_circuit(&c)).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
