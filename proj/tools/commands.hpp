#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "automorph/qform.hpp"

namespace automorph::cli {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* everything a subcommand may read; flags win over --config */
struct RunConfig {
    std::string form, q0, format = "json", config, A;
    std::vector<i64> primes, a, K;
    i64 n_max = 0, a_max = 0, m_max = 0, p_limit = 0, count = 0, seed = 1;
    int d = 0, threads = 0;
    bool list = false;
};

nlohmann::json form_to_json(const QuadraticForm& q);
QuadraticForm form_from_json(const nlohmann::json& j);
/* built-in name, path to a JSON descriptor, or inline JSON */
QuadraticForm resolve_form(const RunConfig& cfg);

/* args exclude the program name; exit code 0 ok, 1 verification failure, 2 usage */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace automorph::cli
