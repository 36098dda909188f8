//! Reader for the OpenQASM 2 subset used as compiler input.
//!
//! Supported statements: `OPENQASM`, `include`, `qreg`, `creg` (ignored),
//! `barrier` (ignored) and the gates `u3`, `u`, `U`, `rz`, `h`, `x`, `cx`,
//! `CX`, `cz`, `swap`. Gates outside `{U3, Rz, CZ}` are rewritten on the fly.

use std::f64::consts::PI;

use super::{Circuit, Gate};
use crate::angle::wrap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str(String),
    Sym(char),
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| Error::Syntax {
        line,
        column: col,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let v = s
                .parse::<f64>()
                .map_err(|_| err(tl, tc, format!("malformed number `{s}`")))?;
            out.push(Token {
                tok: Tok::Num(v),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(err(tl, tc, "unterminated string".into()));
            }
            let s: String = chars[start..i].iter().collect();
            i += 1;
            col += s.chars().count() + 2;
            out.push(Token {
                tok: Tok::Str(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            col += 2;
            out.push(Token {
                tok: Tok::Arrow,
                line: tl,
                col: tc,
            });
            continue;
        }
        if "()[]{};,+-*/^".contains(c) {
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                col: tc,
            });
            continue;
        }
        return Err(err(tl, tc, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

struct Register {
    name: String,
    offset: usize,
    size: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    regs: Vec<Register>,
    num_qubits: usize,
    gates: Vec<Gate>,
}

/// A qubit argument: a single qubit or a whole register.
enum Arg {
    One(usize),
    Reg(usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn location(&self) -> (usize, usize) {
        match self.peek().or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.location();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn next(&mut self) -> Result<Token> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.fail("unexpected end of input"),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Token { tok: Tok::Sym(s), .. }) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{c}`")),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("expected identifier"),
        }
    }

    fn integer(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Token { tok: Tok::Num(v), .. }) if v.fract() == 0.0 && *v >= 0.0 => {
                let v = *v as usize;
                self.pos += 1;
                Ok(v)
            }
            _ => self.fail("expected non-negative integer"),
        }
    }

    fn skip_statement(&mut self) -> Result<()> {
        loop {
            let t = self.next()?;
            if t.tok == Tok::Sym(';') {
                return Ok(());
            }
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v += self.term()?;
            } else if self.eat_sym('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        loop {
            if self.eat_sym('*') {
                v *= self.unary()?;
            } else if self.eat_sym('/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64> {
        if self.eat_sym('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat_sym('^') {
            return Ok(base.powf(self.unary()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64> {
        let t = self.next()?;
        match t.tok {
            Tok::Num(v) => Ok(v),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Tok::Ident(name) if name == "pi" => Ok(PI),
            Tok::Ident(name) => {
                let f: fn(f64) -> f64 = match name.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => {
                        self.pos -= 1;
                        return self.fail(format!("unknown identifier `{name}` in expression"));
                    }
                };
                self.expect_sym('(')?;
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(f(v))
            }
            _ => {
                self.pos -= 1;
                self.fail("expected expression")
            }
        }
    }

    fn arg(&mut self) -> Result<Arg> {
        let name = self.ident()?;
        let Some(reg) = self.regs.iter().find(|r| r.name == name) else {
            self.pos -= 1;
            return self.fail(format!("undeclared register `{name}`"));
        };
        let (offset, size) = (reg.offset, reg.size);
        if self.eat_sym('[') {
            let i = self.integer()?;
            if i >= size {
                self.pos -= 1;
                return self.fail(format!("index {i} out of range for `{name}[{size}]`"));
            }
            self.expect_sym(']')?;
            Ok(Arg::One(offset + i))
        } else {
            Ok(Arg::Reg(offset, size))
        }
    }

    fn h(&mut self, q: usize) {
        self.gates.push(Gate::U3 {
            qubit: q,
            theta: PI / 2.0,
            phi: 0.0,
            lambda: PI,
        });
    }

    fn cx(&mut self, c: usize, t: usize) {
        self.h(t);
        self.gates.push(Gate::Cz { a: c, b: t });
        self.h(t);
    }

    fn emit(&mut self, name: &str, params: &[f64], qubits: &[usize]) {
        match (name, qubits) {
            ("u3" | "u" | "U", &[q]) => self.gates.push(Gate::U3 {
                qubit: q,
                theta: wrap(params[0]),
                phi: wrap(params[1]),
                lambda: wrap(params[2]),
            }),
            ("rz", &[q]) => self.gates.push(Gate::Rz {
                qubit: q,
                lambda: wrap(params[0]),
            }),
            ("h", &[q]) => self.h(q),
            ("x", &[q]) => self.gates.push(Gate::U3 {
                qubit: q,
                theta: PI,
                phi: 0.0,
                lambda: PI,
            }),
            ("cx" | "CX", &[c, t]) => self.cx(c, t),
            ("cz", &[a, b]) => self.gates.push(Gate::Cz { a, b }),
            ("swap", &[a, b]) => {
                self.cx(a, b);
                self.cx(b, a);
                self.cx(a, b);
            }
            _ => unreachable!("arity checked by caller"),
        }
    }

    fn statement(&mut self) -> Result<()> {
        let head = self.next()?;
        let Tok::Ident(name) = head.tok.clone() else {
            self.pos -= 1;
            return self.fail("expected statement");
        };
        match name.as_str() {
            "OPENQASM" | "include" | "creg" | "barrier" => self.skip_statement(),
            "qreg" => {
                let reg = self.ident()?;
                self.expect_sym('[')?;
                let size = self.integer()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                self.regs.push(Register {
                    name: reg,
                    offset: self.num_qubits,
                    size,
                });
                self.num_qubits += size;
                Ok(())
            }
            _ => {
                let (nparams, nqubits) = match name.as_str() {
                    "u3" | "u" | "U" => (3, 1),
                    "rz" => (1, 1),
                    "h" | "x" => (0, 1),
                    "cx" | "CX" | "cz" | "swap" => (0, 2),
                    _ => {
                        return Err(Error::Unsupported {
                            name,
                            line: head.line,
                        })
                    }
                };
                let mut params = Vec::new();
                if self.eat_sym('(') && !self.eat_sym(')') {
                    loop {
                        params.push(self.expr()?);
                        if self.eat_sym(')') {
                            break;
                        }
                        self.expect_sym(',')?;
                    }
                }
                if params.len() != nparams {
                    return self.fail(format!(
                        "`{name}` takes {nparams} parameter(s), got {}",
                        params.len()
                    ));
                }
                let mut args = vec![self.arg()?];
                while self.eat_sym(',') {
                    args.push(self.arg()?);
                }
                self.expect_sym(';')?;
                if args.len() != nqubits {
                    return Err(Error::Syntax {
                        line: head.line,
                        column: head.col,
                        message: format!("`{name}` takes {nqubits} qubit(s), got {}", args.len()),
                    });
                }
                // Register arguments broadcast element-wise.
                let width = args
                    .iter()
                    .filter_map(|a| match a {
                        Arg::Reg(_, s) => Some(*s),
                        Arg::One(_) => None,
                    })
                    .max();
                let reps = width.unwrap_or(1);
                for k in 0..reps {
                    let mut qs = Vec::with_capacity(nqubits);
                    for a in &args {
                        match *a {
                            Arg::One(q) => qs.push(q),
                            Arg::Reg(off, size) if size == reps => qs.push(off + k),
                            Arg::Reg(..) => {
                                return Err(Error::Syntax {
                                    line: head.line,
                                    column: head.col,
                                    message: "register size mismatch in broadcast".into(),
                                })
                            }
                        }
                    }
                    if nqubits == 2 && qs[0] == qs[1] {
                        return Err(Error::Syntax {
                            line: head.line,
                            column: head.col,
                            message: format!("`{name}` applied to the same qubit twice"),
                        });
                    }
                    self.emit(&name, &params, &qs);
                }
                Ok(())
            }
        }
    }
}

/// Parses OpenQASM 2 text into an unscheduled circuit (one gate per moment).
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        regs: Vec::new(),
        num_qubits: 0,
        gates: Vec::new(),
    };
    while p.peek().is_some() {
        p.statement()?;
    }
    Ok(Circuit::from_gates(p.num_qubits, p.gates))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_u3() {
        let c = parse_qasm("qreg q[1]; u3(0,0,0) q[0];").unwrap();
        assert_eq!(c.num_qubits, 1);
        assert_eq!(
            c.gates().copied().collect::<Vec<_>>(),
            vec![Gate::U3 {
                qubit: 0,
                theta: 0.0,
                phi: 0.0,
                lambda: 0.0
            }]
        );
    }

    #[test]
    fn cx_rewrites_to_h_cz_h() {
        let c = parse_qasm("qreg q[2]; cx q[0],q[1];").unwrap();
        let h = Gate::U3 {
            qubit: 1,
            theta: PI / 2.0,
            phi: 0.0,
            lambda: PI,
        };
        assert_eq!(
            c.gates().copied().collect::<Vec<_>>(),
            vec![h, Gate::Cz { a: 0, b: 1 }, h]
        );
    }

    #[test]
    fn unsupported_instruction_is_named() {
        let err = parse_qasm("qreg q[1]; badop q[0];").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unsupported instruction"), "{msg}");
        assert!(msg.contains("badop"), "{msg}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_qasm("qreg q[2];\nh q[0]\ncz q[0], q[1];").unwrap_err();
        match err {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (3, 1)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn expressions_headers_and_broadcast() {
        let text = r#"OPENQASM 2.0;
include "qelib1.inc";
qreg a[2];
qreg b[1];
creg c[3];
// comment
rz(-pi/4 + 2*0.5e-1) a[1];
u(pi^1, -(pi/2), 1.5) b[0];
h a;
barrier a, b;
"#;
        let c = parse_qasm(text).unwrap();
        assert_eq!(c.num_qubits, 3);
        let gates: Vec<_> = c.gates().copied().collect();
        assert_eq!(gates.len(), 4);
        match gates[0] {
            Gate::Rz { qubit, lambda } => {
                assert_eq!(qubit, 1);
                assert!((lambda - (-PI / 4.0 + 0.1)).abs() < 1e-15);
            }
            g => panic!("{g:?}"),
        }
        assert!(matches!(gates[1], Gate::U3 { qubit: 2, .. }));
        assert!(matches!(gates[3], Gate::U3 { qubit: 1, .. }));
    }

    #[test]
    fn out_of_range_index() {
        assert!(matches!(
            parse_qasm("qreg q[2]; h q[2];"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[2]; cz q[1], q[1];"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[1]; measure q[0] -> c[0];"),
            Err(Error::Unsupported { .. })
        ));
    }
}
