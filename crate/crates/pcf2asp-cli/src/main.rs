//! Batch command line for the PCF-to-ASP pipeline.
//!
//! One subcommand per stage: `eval` runs the reference interpreter,
//! `transpile` emits the ASP translation, `ground` runs the bottom-up
//! grounder on a positive `.lp` file, `run` chains translate-ground-extract,
//! and `solve` enumerates answer sets of search problems. Results go to
//! stdout, diagnostics to stderr, and each error class has a fixed exit
//! code so differential scripts can tell them apart.

use std::path::{Path, PathBuf};
use std::process::exit;

use clap::{Parser, Subcommand};

use pcf2asp::asp::{emit, parse_program};
use pcf2asp::eval::{evaluate, Closure, EvalError, StepBudget, Value};
use pcf2asp::ground::{
    extract_result, ground_positive, GroundBudget, GroundError, ResultError,
};
use pcf2asp::pcf::{parse_expr, Expr};
use pcf2asp::search::{
    export_for_external_solver, header_decls, parse_var_decl, solve_enumerative,
    transpile_with_choices_mode, SearchError, SearchProblem, SolveError, VarDecl,
};
use pcf2asp::span::SourceSpan;
use pcf2asp::transpile::{ScopeMode, TranslateError, Translator};

/// Stable exit codes, one per error class.
mod exit_code {
    pub const PARSE: i32 = 3;
    pub const STUCK: i32 = 4;
    pub const BUDGET: i32 = 5;
    pub const GROUND: i32 = 6;
    pub const MISMATCH: i32 = 7;
    pub const RESULT: i32 = 8;
    pub const SEARCH: i32 = 9;
    pub const IO: i32 = 10;
}

const BUDGET_ENV: &str = "PCF2ASP_BUDGET";

#[derive(Parser)]
#[command(name = "pcf2asp", version, about = "Translate PCF programs to answer set programs")]
struct Cli {
    /// Budget override: interpreter steps and grounder atoms/iterations.
    /// Also read from PCF2ASP_BUDGET.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a PCF file with the reference interpreter.
    Eval {
        /// PCF source file.
        file: PathBuf,
    },
    /// Translate a PCF file to an ASP program.
    Transpile {
        /// PCF source file.
        file: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Keep only used variables in scope tuples.
        #[arg(long)]
        prune_scope: bool,
    },
    /// Translate, ground, and print the result value.
    Run {
        /// PCF source file.
        file: PathBuf,
        /// Also evaluate with the interpreter and fail on disagreement.
        #[arg(long)]
        check: bool,
        /// Keep only used variables in scope tuples.
        #[arg(long)]
        prune_scope: bool,
    },
    /// Ground a positive ASP program bottom-up and print its answer set.
    Ground {
        /// ASP program file (.lp).
        file: PathBuf,
    },
    /// Enumerate answer sets: PCF with declared variables, or an .lp file.
    Solve {
        /// PCF source file, or an .lp file to solve directly.
        file: PathBuf,
        /// Declare a search variable, e.g. --var a=1..10 (repeatable).
        #[arg(long = "var", value_name = "NAME=LO..HI", value_parser = parse_decl_arg)]
        vars: Vec<VarDecl>,
        /// Require the program to evaluate to 0.
        #[arg(long)]
        require_zero: bool,
        /// Write the program for an external solver instead of solving.
        #[arg(long, value_name = "FILE")]
        export: Option<PathBuf>,
        /// Keep only used variables in scope tuples.
        #[arg(long)]
        prune_scope: bool,
    },
}

fn parse_decl_arg(s: &str) -> Result<VarDecl, String> {
    parse_var_decl(s).map_err(|e| e.to_string())
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

struct Budgets {
    steps: StepBudget,
    ground: GroundBudget,
}

fn budgets(flag: Option<u64>) -> Result<Budgets, Failure> {
    let from_env = match std::env::var(BUDGET_ENV) {
        Ok(raw) => Some(raw.parse::<u64>().map_err(|_| {
            Failure::new(2, format!("{BUDGET_ENV} must be a non-negative integer, got `{raw}`"))
        })?),
        Err(_) => None,
    };
    Ok(match flag.or(from_env) {
        Some(n) => Budgets {
            steps: StepBudget::new(n),
            ground: GroundBudget::new(n as usize, n as usize),
        },
        None => Budgets { steps: StepBudget::default(), ground: GroundBudget::default() },
    })
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(exit_code::IO, format!("cannot read {}: {e}", path.display())))
}

fn at(source: &str, span: SourceSpan) -> String {
    let (line, col) = span.line_col(source);
    format!("line {line}, column {col}")
}

fn parse_pcf_file(path: &Path) -> Result<(String, Expr), Failure> {
    let source = read_file(path)?;
    let expr = parse_expr(&source).map_err(|e| {
        Failure::new(
            exit_code::PARSE,
            format!("{}: {} ({})", path.display(), e.message, at(&source, e.span)),
        )
    })?;
    Ok((source, expr))
}

fn eval_failure(err: EvalError) -> Failure {
    let code = match err {
        EvalError::BudgetExhausted => exit_code::BUDGET,
        _ => exit_code::STUCK,
    };
    Failure::new(code, err.to_string())
}

fn translate_failure(err: TranslateError) -> Failure {
    Failure::new(exit_code::STUCK, err.to_string())
}

fn ground_failure(err: GroundError) -> Failure {
    match err {
        GroundError::BudgetExceeded(_) => Failure::new(exit_code::BUDGET, err.to_string()),
        GroundError::NonPositiveProgram(_) => Failure::new(
            exit_code::GROUND,
            format!("{err}; use `pcf2asp solve` for programs with choices, constraints or negation"),
        ),
        _ => Failure::new(exit_code::GROUND, err.to_string()),
    }
}

fn result_failure(err: ResultError) -> Failure {
    Failure::new(exit_code::RESULT, err.to_string())
}

fn search_failure(err: SearchError) -> Failure {
    Failure::new(exit_code::SEARCH, err.to_string())
}

fn solve_failure(err: SolveError) -> Failure {
    match err {
        SolveError::BudgetExceeded(_) => Failure::new(exit_code::BUDGET, err.to_string()),
        SolveError::Ground(g) => ground_failure(g),
        SolveError::UnsupportedRuleForm(_) => Failure::new(exit_code::SEARCH, err.to_string()),
    }
}

fn scope_mode(prune: bool) -> ScopeMode {
    if prune {
        ScopeMode::UsedOnly
    } else {
        ScopeMode::Full
    }
}

fn write_or_print(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::new(exit_code::IO, format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_eval(file: &Path, budgets: &Budgets) -> Result<(), Failure> {
    let (_, expr) = parse_pcf_file(file)?;
    let value = evaluate(&Closure::closed(expr), budgets.steps).map_err(eval_failure)?;
    println!("{value}");
    Ok(())
}

fn cmd_transpile(file: &Path, output: Option<&Path>, prune: bool) -> Result<(), Failure> {
    let (_, expr) = parse_pcf_file(file)?;
    let program = Translator::new(scope_mode(prune))
        .translate(&expr)
        .map_err(translate_failure)?;
    write_or_print(&emit(&program), output)
}

fn cmd_run(file: &Path, check: bool, prune: bool, budgets: &Budgets) -> Result<(), Failure> {
    let (_, expr) = parse_pcf_file(file)?;
    let program = Translator::new(scope_mode(prune))
        .translate(&expr)
        .map_err(translate_failure)?;
    let answer = ground_positive(&program, &budgets.ground).map_err(ground_failure)?;
    let grounded = extract_result(&answer);

    if check {
        let value = evaluate(&Closure::closed(expr), budgets.steps).map_err(eval_failure)?;
        if let Value::Nat(n) = value {
            match &grounded {
                Ok(Some(m)) if *m == n as i64 => {}
                other => {
                    let seen = match other {
                        Ok(Some(m)) => format!("result({m})"),
                        Ok(None) => "no result atom".to_string(),
                        Err(e) => e.to_string(),
                    };
                    return Err(Failure::new(
                        exit_code::MISMATCH,
                        format!("interpreter produced {n} but grounding produced {seen}"),
                    ));
                }
            }
        }
    }

    match grounded.map_err(result_failure)? {
        Some(n) => println!("{n}"),
        None => println!("no result"),
    }
    Ok(())
}

fn cmd_ground(file: &Path, budgets: &Budgets) -> Result<(), Failure> {
    let source = read_file(file)?;
    let program = parse_program(&source).map_err(|e| {
        Failure::new(
            exit_code::PARSE,
            format!("{}: {} ({})", file.display(), e.message, at(&source, e.span)),
        )
    })?;
    let answer = ground_positive(&program, &budgets.ground).map_err(ground_failure)?;
    println!("{}", answer.display_line());
    Ok(())
}

fn cmd_solve(
    file: &Path,
    vars: Vec<VarDecl>,
    require_zero: bool,
    export: Option<&Path>,
    prune: bool,
    budgets: &Budgets,
) -> Result<(), Failure> {
    let is_asp = file.extension().is_some_and(|ext| ext == "lp");
    let program = if is_asp {
        if !vars.is_empty() || require_zero {
            return Err(Failure::new(
                exit_code::SEARCH,
                "--var and --require-zero only apply to PCF inputs",
            ));
        }
        let source = read_file(file)?;
        parse_program(&source).map_err(|e| {
            Failure::new(
                exit_code::PARSE,
                format!("{}: {} ({})", file.display(), e.message, at(&source, e.span)),
            )
        })?
    } else {
        let (source, expr) = parse_pcf_file(file)?;
        let mut decls = header_decls(&source).map_err(search_failure)?;
        decls.extend(vars);
        let problem = SearchProblem { expr, decls, require_zero };
        transpile_with_choices_mode(&problem, scope_mode(prune)).map_err(search_failure)?
    };

    if let Some(path) = export {
        return export_for_external_solver(&program, path).map_err(|e| {
            Failure::new(exit_code::IO, format!("cannot write {}: {e}", path.display()))
        });
    }

    let models = solve_enumerative(&program, &budgets.ground).map_err(solve_failure)?;
    for model in &models {
        println!("{}", model.display_line());
    }
    println!("{}", models.len());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let budgets = budgets(cli.budget)?;
    match cli.command {
        Command::Eval { file } => cmd_eval(&file, &budgets),
        Command::Transpile { file, output, prune_scope } => {
            cmd_transpile(&file, output.as_deref(), prune_scope)
        }
        Command::Run { file, check, prune_scope } => {
            cmd_run(&file, check, prune_scope, &budgets)
        }
        Command::Ground { file } => cmd_ground(&file, &budgets),
        Command::Solve { file, vars, require_zero, export, prune_scope } => {
            cmd_solve(&file, vars, require_zero, export.as_deref(), prune_scope, &budgets)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(failure) = run(cli) {
        eprintln!("error: {}", failure.message);
        exit(failure.code);
    }
}
