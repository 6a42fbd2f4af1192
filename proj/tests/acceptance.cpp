// One PASS/FAIL line per acceptance criterion. Criteria 1-9 run in process;
// criterion 10 runs `equant verify-all` twice and compares the CSV bytes.

#include "equant/acceptance.hpp"
#include "equant/report.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_verify_all(const fs::path& out) {
    const std::string cmd = "'" + std::string(EQUANT_CLI_PATH) + "' verify-all --out '" + out.string() + "' >'" +
                            (out.string() + ".log") + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void print_measurements(const equant::CriterionResult& c) {
    for (const auto& m : c.measurements) {
        std::cout << "    " << m.name << " = " << equant::format_number(m.value) << (m.at_least ? " >= " : " <= ")
                  << equant::format_number(m.limit) << (m.passed() ? "" : "  <-- violated") << '\n';
    }
    if (!c.error.empty()) std::cout << "    error: " << c.error << '\n';
}

}  // namespace

int main() {
    bool all = true;
    for (const auto& c : equant::run_acceptance()) {
        const bool ok = c.passed();
        all = all && ok;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << '\n';
        print_measurements(c);
    }

    const fs::path dir = fs::temp_directory_path() / ("equant_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const int first = run_verify_all(dir / "run1");
    const int second = run_verify_all(dir / "run2");
    const std::string a = slurp(dir / "run1" / "verify-all.csv");
    const std::string b = slurp(dir / "run2" / "verify-all.csv");
    const bool identical = !a.empty() && a == b;
    const bool ok10 = first == 0 && second == 0 && identical;
    all = all && ok10;
    std::cout << (ok10 ? "PASS" : "FAIL") << " criterion 10: reproducible verify-all\n"
              << "    exit codes = " << first << ", " << second << "\n"
              << "    csv bytes identical = " << (identical ? "true" : "false") << " (" << a.size() << " bytes)\n";
    if (ok10) fs::remove_all(dir);

    return all ? 0 : 1;
}
