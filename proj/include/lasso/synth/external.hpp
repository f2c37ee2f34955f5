#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "lasso/error.hpp"

namespace lasso::synth {

/// Environment variable naming the default external QBF solver command.
inline constexpr const char* kSolverEnv = "LASSO_QBF_SOLVER";

struct ExternalResult {
    bool sat = false;
    std::optional<std::map<int, bool>> assignment;  // absent in verdict-only mode
    int exit_code = 0;
    std::string output;
};

/// Reads a solver's answer: a QDIMACS solution line "s cnf 1|0 …", a
/// SAT/UNSAT (or SATISFIABLE/UNSATISFIABLE, optionally prefixed by "s")
/// verdict line, or — failing both — the conventional exit codes 10/20.
/// Assignment lines are "V <lit> [0]" or "v <lit> <lit> … 0".
inline ExternalResult parse_solver_output(const std::string& output, int exit_code) {
    ExternalResult r;
    r.exit_code = exit_code;
    r.output = output;
    std::optional<bool> verdict;
    std::map<int, bool> values;
    std::istringstream in(output);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "s") {
            std::string a;
            ls >> a;
            if (a == "cnf") {
                int v = -1;
                if (ls >> v) {
                    if (v == 1) verdict = true;
                    else if (v == 0) verdict = false;
                }
            } else if (a == "SATISFIABLE" || a == "SAT") {
                verdict = true;
            } else if (a == "UNSATISFIABLE" || a == "UNSAT") {
                verdict = false;
            }
        } else if (tok == "SAT" || tok == "SATISFIABLE") {
            verdict = true;
        } else if (tok == "UNSAT" || tok == "UNSATISFIABLE") {
            verdict = false;
        } else if (tok == "V" || tok == "v") {
            long lit;
            while (ls >> lit && lit != 0) values[static_cast<int>(std::labs(lit))] = lit > 0;
        }
    }
    if (!verdict) {
        if (exit_code == 10) verdict = true;
        else if (exit_code == 20) verdict = false;
        else throw SolverError("external solver gave no verdict (exit code " + std::to_string(exit_code) + ")");
    }
    r.sat = *verdict;
    if (r.sat && !values.empty()) r.assignment = std::move(values);
    return r;
}

/// Runs `command <file>` on the QDIMACS text written to a temporary file.
inline ExternalResult run_external_solver(const std::string& command, const std::string& qdimacs) {
    if (command.empty()) throw SolverError("no external solver command configured");
    std::string path = (std::filesystem::temp_directory_path() / "lasso-qbf-XXXXXX").string();
    const int fd = mkstemp(path.data());
    if (fd < 0) throw SolverError("cannot create a temporary file for the solver");
    {
        FILE* f = fdopen(fd, "w");
        if (!f) {
            close(fd);
            throw SolverError("cannot write the temporary solver input");
        }
        const bool ok = std::fwrite(qdimacs.data(), 1, qdimacs.size(), f) == qdimacs.size();
        std::fclose(f);
        if (!ok) throw SolverError("cannot write the temporary solver input");
    }
    const std::string cmd = command + " '" + path + "'";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        std::filesystem::remove(path);
        throw SolverError("cannot start external solver: " + command);
    }
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
    const int status = pclose(pipe);
    std::filesystem::remove(path);
    if (status == -1) throw SolverError("external solver did not terminate normally");
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code == 127) throw SolverError("external solver command not found: " + command);
    return parse_solver_output(output, code);
}

/// Solver command from the environment, if set.
inline std::optional<std::string> solver_from_environment() {
    const char* v = std::getenv(kSolverEnv);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

} // namespace lasso::synth
