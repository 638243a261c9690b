//! A DIMACS front end for the kissat library, speaking the usual
//! competition output format: `s` status line and `v` model lines.
//!
//! Usage: `borsuk-kissat <file.cnf>`

use std::process::ExitCode;

use borsuk_core::coloring::parse_dimacs;
use rustsat::solvers::{Solve, SolverResult};
use rustsat::types::{Clause, Lit, TernaryVal, Var};
use rustsat_kissat::Kissat;

fn run(path: &str) -> Result<u8, Box<dyn std::error::Error + Send + Sync>> {
    let text = std::fs::read_to_string(path)?;
    let formula = parse_dimacs(&text)?;
    let mut solver = Kissat::default();
    println!(
        "c borsuk-kissat {} (kissat {})",
        env!("CARGO_PKG_VERSION"),
        Kissat::version()
    );
    for clause in &formula.clauses {
        let lits = clause
            .iter()
            .map(|&l| Lit::from_ipasir(l))
            .collect::<Result<Clause, _>>()?;
        solver.add_clause(lits)?;
    }
    match solver.solve()? {
        SolverResult::Sat => {
            println!("s SATISFIABLE");
            let mut line = String::from("v");
            for v in 0..formula.variable_count {
                let lit = v as i64 + 1;
                let val = match solver.var_val(Var::new(v)) {
                    Ok(TernaryVal::True) => lit,
                    _ => -lit,
                };
                line.push_str(&format!(" {val}"));
                if line.len() > 70 {
                    println!("{line}");
                    line = String::from("v");
                }
            }
            println!("{line} 0");
            Ok(10)
        }
        SolverResult::Unsat => {
            println!("s UNSATISFIABLE");
            Ok(20)
        }
        SolverResult::Interrupted => {
            println!("s UNKNOWN");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: borsuk-kissat <file.cnf>");
        return ExitCode::from(64);
    };
    match run(&path) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("borsuk-kissat: {e}");
            ExitCode::from(1)
        }
    }
}
