//! OpenQASM 2.0 subset reader and writer.
//!
//! Accepts the `qelib1.inc` single-qubit gates, `cx`, `swap`, `measure` and
//! `barrier`. Quantum registers are flattened into one index space in
//! declaration order, and likewise for classical registers. Barriers are
//! dropped. Angle expressions are evaluated to `f64` while parsing.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::circuit::{Gate, GateKind, LogicalCircuit};

/// Upper bound on the summed size of all registers of one kind.
pub const MAX_REGISTER_BITS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QasmError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported gate `{name}` at line {line}")]
    UnsupportedGate { name: String, line: usize },
    #[error("index {index} out of range for register `{register}` (size {size}) at line {line}")]
    IndexOutOfRange {
        register: String,
        index: usize,
        size: usize,
        line: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Sym(char),
    Arrow,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let syntax = |line, column, message: &str| QasmError::Syntax {
        line,
        column,
        message: message.to_string(),
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
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            col += 2;
            loop {
                match chars.get(i) {
                    None => return Err(syntax(tl, tc, "unterminated block comment")),
                    Some('*') if chars.get(i + 1) == Some(&'/') => {
                        i += 2;
                        col += 2;
                        break;
                    }
                    Some('\n') => {
                        i += 1;
                        line += 1;
                        col = 1;
                    }
                    Some(_) => {
                        i += 1;
                        col += 1;
                    }
                }
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            tokens.push(Token {
                tok: Tok::Ident(word),
                line: tl,
                column: tc,
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
            let literal: String = chars[start..i].iter().collect();
            col += i - start;
            let value: f64 = literal
                .parse()
                .map_err(|_| syntax(tl, tc, &format!("malformed number `{literal}`")))?;
            tokens.push(Token {
                tok: Tok::Number(value),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if chars.get(i) != Some(&'"') {
                return Err(syntax(tl, tc, "unterminated string"));
            }
            let s: String = chars[start..i].iter().collect();
            i += 1;
            col += s.chars().count() + 2;
            tokens.push(Token {
                tok: Tok::Str(s),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            col += 2;
            tokens.push(Token {
                tok: Tok::Arrow,
                line: tl,
                column: tc,
            });
            continue;
        }
        if ";,[](){}+-*/^=<>".contains(c) {
            i += 1;
            col += 1;
            tokens.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                column: tc,
            });
            continue;
        }
        return Err(syntax(tl, tc, &format!("unexpected character `{c}`")));
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(tokens)
}

#[derive(Clone)]
struct Register {
    offset: usize,
    size: usize,
}

/// An operand: either one bit of a register or a whole register.
enum Arg {
    Bit(usize),
    Whole(Vec<usize>),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    qregs: HashMap<String, Register>,
    cregs: HashMap<String, Register>,
    num_qubits: usize,
    num_clbits: usize,
    gates: Vec<Gate>,
    dropped_barriers: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, token: &Token, message: impl Into<String>) -> QasmError {
        QasmError::Syntax {
            line: token.line,
            column: token.column,
            message: message.into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), QasmError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(self.error_at(&t, format!("expected `{c}`, found {}", describe(&t.tok))))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Token), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => Err(self.error_at(&t, format!("expected identifier, found {}", describe(other)))),
        }
    }

    fn expect_uint(&mut self) -> Result<usize, QasmError> {
        let t = self.next();
        match t.tok {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 && v < 1e9 => Ok(v as usize),
            ref other => Err(self.error_at(&t, format!("expected integer, found {}", describe(other)))),
        }
    }

    fn parse_program(&mut self) -> Result<(), QasmError> {
        // Optional header.
        if matches!(&self.peek().tok, Tok::Ident(s) if s == "OPENQASM") {
            self.next();
            let t = self.next();
            match t.tok {
                Tok::Number(v) if (2.0..3.0).contains(&v) => {}
                _ => return Err(self.error_at(&t, "only OPENQASM 2.x is supported")),
            }
            self.expect_sym(';')?;
        }
        while self.peek().tok != Tok::Eof {
            self.parse_statement()?;
        }
        Ok(())
    }

    fn parse_statement(&mut self) -> Result<(), QasmError> {
        let (word, tok) = self.expect_ident()?;
        match word.as_str() {
            "include" => {
                let t = self.next();
                if !matches!(t.tok, Tok::Str(_)) {
                    return Err(self.error_at(&t, "expected file name string"));
                }
                self.expect_sym(';')
            }
            "qreg" | "creg" => {
                let (name, name_tok) = self.expect_ident()?;
                self.expect_sym('[')?;
                let size = self.expect_uint()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                let (map, counter) = if word == "qreg" {
                    (&mut self.qregs, &mut self.num_qubits)
                } else {
                    (&mut self.cregs, &mut self.num_clbits)
                };
                if map.contains_key(&name) {
                    return Err(QasmError::Syntax {
                        line: name_tok.line,
                        column: name_tok.column,
                        message: format!("register `{name}` declared twice"),
                    });
                }
                if *counter + size > MAX_REGISTER_BITS {
                    return Err(QasmError::Syntax {
                        line: name_tok.line,
                        column: name_tok.column,
                        message: format!("more than {MAX_REGISTER_BITS} bits declared"),
                    });
                }
                map.insert(name, Register { offset: *counter, size });
                *counter += size;
                Ok(())
            }
            "gate" | "opaque" | "if" | "reset" => Err(QasmError::UnsupportedGate {
                name: word,
                line: tok.line,
            }),
            "measure" => self.parse_measure(&tok),
            "barrier" => {
                self.parse_args(true)?;
                self.expect_sym(';')?;
                self.dropped_barriers += 1;
                Ok(())
            }
            _ => self.parse_gate(word, &tok),
        }
    }

    fn parse_measure(&mut self, tok: &Token) -> Result<(), QasmError> {
        let q = self.parse_arg(true)?;
        let arrow = self.next();
        if arrow.tok != Tok::Arrow {
            return Err(self.error_at(&arrow, "expected `->`"));
        }
        let c = self.parse_arg(false)?;
        self.expect_sym(';')?;
        let pairs: Vec<(usize, usize)> = match (q, c) {
            (Arg::Bit(q), Arg::Bit(c)) => vec![(q, c)],
            (Arg::Whole(qs), Arg::Whole(cs)) if qs.len() == cs.len() => qs.into_iter().zip(cs).collect(),
            _ => return Err(self.error_at(tok, "measure operands have mismatched sizes")),
        };
        for (q, c) in pairs {
            self.gates.push(Gate::measure(q, c));
        }
        Ok(())
    }

    fn parse_gate(&mut self, name: String, tok: &Token) -> Result<(), QasmError> {
        let kind = match GateKind::from_mnemonic(&name) {
            Some(k) if !matches!(k, GateKind::Measure | GateKind::Barrier) => k,
            _ => {
                return Err(QasmError::UnsupportedGate { name, line: tok.line });
            }
        };
        let mut params = Vec::new();
        if self.peek().tok == Tok::Sym('(') {
            self.next();
            if self.peek().tok != Tok::Sym(')') {
                loop {
                    params.push(self.parse_expr()?);
                    if self.peek().tok == Tok::Sym(',') {
                        self.next();
                    } else {
                        break;
                    }
                }
            }
            self.expect_sym(')')?;
        }
        if params.len() != kind.num_params() {
            return Err(self.error_at(
                tok,
                format!(
                    "`{name}` takes {} parameter(s), got {}",
                    kind.num_params(),
                    params.len()
                ),
            ));
        }
        let args = self.parse_args(true)?;
        self.expect_sym(';')?;
        if args.len() != kind.arity() {
            return Err(self.error_at(
                tok,
                format!("`{name}` takes {} operand(s), got {}", kind.arity(), args.len()),
            ));
        }
        // Register broadcasting: whole-register operands must agree in size.
        let width = args
            .iter()
            .filter_map(|a| match a {
                Arg::Whole(v) => Some(v.len()),
                Arg::Bit(_) => None,
            })
            .try_fold(None::<usize>, |acc, len| match acc {
                Some(prev) if prev != len => Err(()),
                _ => Ok(Some(len)),
            })
            .map_err(|_| self.error_at(tok, "register operands have mismatched sizes"))?;
        let repeats = width.unwrap_or(1);
        for k in 0..repeats {
            let qubits: Vec<usize> = args
                .iter()
                .map(|a| match a {
                    Arg::Bit(q) => *q,
                    Arg::Whole(v) => v[k],
                })
                .collect();
            if qubits.len() == 2 && qubits[0] == qubits[1] {
                return Err(self.error_at(tok, format!("`{name}` repeats an operand")));
            }
            self.gates.push(Gate::new(kind, qubits, params.clone()));
        }
        Ok(())
    }

    fn parse_args(&mut self, quantum: bool) -> Result<Vec<Arg>, QasmError> {
        let mut args = vec![self.parse_arg(quantum)?];
        while self.peek().tok == Tok::Sym(',') {
            self.next();
            args.push(self.parse_arg(quantum)?);
        }
        Ok(args)
    }

    fn parse_arg(&mut self, quantum: bool) -> Result<Arg, QasmError> {
        let (name, tok) = self.expect_ident()?;
        let regs = if quantum { &self.qregs } else { &self.cregs };
        let Some(reg) = regs.get(&name).cloned() else {
            let kind = if quantum { "qreg" } else { "creg" };
            return Err(self.error_at(&tok, format!("undeclared {kind} `{name}`")));
        };
        if self.peek().tok == Tok::Sym('[') {
            self.next();
            let index = self.expect_uint()?;
            self.expect_sym(']')?;
            if index >= reg.size {
                return Err(QasmError::IndexOutOfRange {
                    register: name,
                    index,
                    size: reg.size,
                    line: tok.line,
                });
            }
            Ok(Arg::Bit(reg.offset + index))
        } else {
            Ok(Arg::Whole((reg.offset..reg.offset + reg.size).collect()))
        }
    }

    // expr := term (('+'|'-') term)*
    fn parse_expr(&mut self) -> Result<f64, QasmError> {
        let mut value = self.parse_term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.next();
                    value += self.parse_term()?;
                }
                Tok::Sym('-') => {
                    self.next();
                    value -= self.parse_term()?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn parse_term(&mut self) -> Result<f64, QasmError> {
        let mut value = self.parse_unary()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.next();
                    value *= self.parse_unary()?;
                }
                Tok::Sym('/') => {
                    self.next();
                    value /= self.parse_unary()?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<f64, QasmError> {
        match self.peek().tok {
            Tok::Sym('-') => {
                self.next();
                Ok(-self.parse_unary()?)
            }
            Tok::Sym('+') => {
                self.next();
                self.parse_unary()
            }
            _ => self.parse_power(),
        }
    }

    fn parse_power(&mut self) -> Result<f64, QasmError> {
        let base = self.parse_atom()?;
        if self.peek().tok == Tok::Sym('^') {
            self.next();
            let exp = self.parse_unary()?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<f64, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Number(v) => Ok(*v),
            Tok::Sym('(') => {
                let v = self.parse_expr()?;
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
                    _ => return Err(self.error_at(&t, format!("unknown identifier `{name}` in expression"))),
                };
                self.expect_sym('(')?;
                let v = self.parse_expr()?;
                self.expect_sym(')')?;
                Ok(f(v))
            }
            other => Err(self.error_at(&t, format!("expected expression, found {}", describe(other)))),
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(v) => format!("`{v}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Arrow => "`->`".to_string(),
        Tok::Eof => "end of input".to_string(),
    }
}

/// Parses an OpenQASM 2.0 program into a flattened [`LogicalCircuit`].
pub fn parse_qasm(text: &str) -> Result<LogicalCircuit, QasmError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        qregs: HashMap::new(),
        cregs: HashMap::new(),
        num_qubits: 0,
        num_clbits: 0,
        gates: Vec::new(),
        dropped_barriers: 0,
    };
    parser.parse_program()?;
    if parser.dropped_barriers > 0 {
        log::warn!("dropped {} barrier statement(s)", parser.dropped_barriers);
    }
    Ok(LogicalCircuit {
        num_qubits: parser.num_qubits,
        num_clbits: parser.num_clbits,
        gates: parser.gates,
    })
}

/// Writes `circuit` as an OpenQASM 2.0 program over one register `q` of
/// `num_physical` qubits (and one register `c` when the circuit measures).
pub fn serialize_qasm(circuit: &LogicalCircuit, num_physical: usize) -> String {
    let mut out = String::with_capacity(32 + circuit.gates.len() * 16);
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{num_physical}];");
    let num_clbits = circuit
        .gates
        .iter()
        .filter_map(|g| g.clbit.map(|c| c + 1))
        .max()
        .unwrap_or(0)
        .max(circuit.num_clbits);
    if num_clbits > 0 {
        let _ = writeln!(out, "creg c[{num_clbits}];");
    }
    for gate in &circuit.gates {
        if gate.kind == GateKind::Measure {
            let _ = writeln!(out, "measure q[{}] -> c[{}];", gate.qubits[0], gate.clbit.unwrap_or(0));
            continue;
        }
        out.push_str(gate.kind.mnemonic());
        if !gate.params.is_empty() {
            out.push('(');
            for (i, p) in gate.params.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                // `{:?}` prints the shortest representation that round-trips.
                let _ = write!(out, "{p:?}");
            }
            out.push(')');
        }
        out.push(' ');
        for (i, q) in gate.qubits.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "q[{q}]");
        }
        out.push_str(";\n");
    }
    out
}
