#include "memoheat/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace memoheat {

using json = nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& what)
{
    throw Error(ErrorKind::schema_error, "field \"" + field + "\": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path)
{
    const auto it = obj.find(key);
    if (it == obj.end())
        schema(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number())
        schema(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        schema(path, "expected a finite number");
    return x;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path)
{
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, path + key);
}

int integer(const json& v, const std::string& path)
{
    if (!v.is_number_integer())
        schema(path, "expected an integer");
    return v.get<int>();
}

std::vector<double> numbers(const json& v, const std::string& path)
{
    if (!v.is_array())
        schema(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path)
{
    for (const auto& [k, _] : obj.items()) {
        bool known = false;
        for (const char* allowed : keys)
            known = known || k == allowed;
        if (!known)
            schema(path.empty() ? k : path + "." + k, "unknown key");
    }
}

struct ParsedKernel {
    Kernel kernel;
    std::size_t terms;
};

ParsedKernel parse_kernel(const json& v)
{
    if (!v.is_object())
        schema("kernel", "expected an object");
    if (v.contains("a") || v.contains("b")) {
        only_keys(v, {"a", "b"}, "kernel");
        return {Kernel(numbers(require(v, "a", "kernel"), "kernel.a"),
                       numbers(require(v, "b", "kernel"), "kernel.b")),
                0};
    }
    only_keys(v, {"A", "p", "B", "q", "tail_tol", "max_terms"}, "kernel");
    KernelGenerator gen;
    gen.A = number(require(v, "A", "kernel"), "kernel.A");
    gen.p = number(require(v, "p", "kernel"), "kernel.p");
    gen.B = number(require(v, "B", "kernel"), "kernel.B");
    gen.q = number(require(v, "q", "kernel"), "kernel.q");
    gen.tail_tol = number(require(v, "tail_tol", "kernel"), "kernel.tail_tol");
    if (const auto it = v.find("max_terms"); it != v.end()) {
        const int m = integer(*it, "kernel.max_terms");
        if (m < 1)
            schema("kernel.max_terms", "must be >= 1");
        gen.max_terms = static_cast<std::size_t>(m);
    }
    auto g = generate_kernel(gen);
    return {std::move(g.kernel), g.terms};
}

std::vector<double> parse_xi(const json& v, int N)
{
    if (v.is_array()) {
        auto xi = numbers(v, "xi");
        if (static_cast<int>(xi.size()) > N)
            throw Error(ErrorKind::config_error, "xi lists " + std::to_string(xi.size()) +
                                                     " coefficients but N = " + std::to_string(N));
        xi.resize(static_cast<std::size_t>(N), 0.0);
        return xi;
    }
    if (!v.is_object())
        schema("xi", "expected a list, {\"delta\": m} or {\"decay\": p}");
    std::vector<double> xi(static_cast<std::size_t>(N), 0.0);
    if (v.contains("delta")) {
        only_keys(v, {"delta", "scale"}, "xi");
        const int m = integer(v["delta"], "xi.delta");
        if (m < 1 || m > N)
            throw Error(ErrorKind::config_error, "xi.delta = " + std::to_string(m) + " outside 1..N");
        xi[static_cast<std::size_t>(m - 1)] = number_or(v, "scale", 1.0, "xi.");
        return xi;
    }
    if (v.contains("decay")) {
        only_keys(v, {"decay", "scale"}, "xi");
        const double p = number(v["decay"], "xi.decay");
        const double c = number_or(v, "scale", 1.0, "xi.");
        for (int n = 1; n <= N; ++n)
            xi[static_cast<std::size_t>(n - 1)] = c * std::pow(double(n), -p);
        return xi;
    }
    schema("xi", "expected a list, {\"delta\": m} or {\"decay\": p}");
}

Forcing parse_forcing(const json& v)
{
    Forcing f;
    if (!v.is_array())
        schema("forcing", "expected an array of mode entries");
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string path = "forcing[" + std::to_string(i) + "]";
        const json& e = v[i];
        if (!e.is_object())
            schema(path, "expected an object");
        only_keys(e, {"n", "terms", "samples"}, path);
        const int n = integer(require(e, "n", path), path + ".n");
        if (n < 1)
            throw Error(ErrorKind::config_error, path + ".n must be >= 1");
        if (f.modes.count(n))
            throw Error(ErrorKind::config_error, path + ": mode " + std::to_string(n) + " listed twice");
        if (e.contains("terms") == e.contains("samples"))
            schema(path, "needs exactly one of \"terms\" or \"samples\"");
        if (e.contains("samples")) {
            f.modes[n] = ModeForcing::from_samples(numbers(e["samples"], path + ".samples"));
            continue;
        }
        const json& terms = e["terms"];
        if (!terms.is_array())
            schema(path + ".terms", "expected an array");
        std::vector<DampedSinusoid> rule;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            const std::string tp = path + ".terms[" + std::to_string(j) + "]";
            const json& t = terms[j];
            if (!t.is_object())
                schema(tp, "expected an object");
            only_keys(t, {"c", "lambda", "omega", "kind"}, tp);
            DampedSinusoid d;
            d.c = number(require(t, "c", tp), tp + ".c");
            d.lambda = number_or(t, "lambda", 0.0, tp + ".");
            d.omega = number_or(t, "omega", 0.0, tp + ".");
            const std::string kind = t.value("kind", std::string("sin"));
            if (kind == "sin")
                d.shape = Oscillation::sin;
            else if (kind == "cos")
                d.shape = Oscillation::cos;
            else
                throw Error(ErrorKind::unknown_forcing, tp + ".kind '" + kind + "' is not sin or cos");
            rule.push_back(d);
        }
        f.modes[n] = ModeForcing::from_terms(std::move(rule));
    }
    return f;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

void Scenario::validate() const
{
    auto fail = [](const std::string& what) { throw Error(ErrorKind::config_error, what); };
    if (N < 1)
        fail("N must be >= 1");
    if (xi.size() != static_cast<std::size_t>(N))
        fail("xi must hold exactly N coefficients");
    for (double v : xi)
        if (!std::isfinite(v))
            fail("xi coefficients must be finite");
    if (!(grid.step() > 0.0))
        fail("grid step must be positive");
    if (!(eps > 0.0) || !std::isfinite(eps))
        fail("eps must be positive");
    if (!std::isfinite(s))
        fail("s must be finite");
    if (!std::isfinite(forcing_weight) || forcing_weight < 0.0)
        fail("forcing_weight must be finite and >= 0");
    for (const auto& [n, rule] : forcing.modes) {
        if (n < 1 || n > N)
            fail("forcing mode " + std::to_string(n) + " outside 1..N");
        if (rule.is_sampled() && rule.samples().size() != grid.points())
            fail("forcing mode " + std::to_string(n) + " has " + std::to_string(rule.samples().size()) +
                 " samples, grid has " + std::to_string(grid.points()) + " points");
    }
}

std::string Scenario::canonical_json() const
{
    json j;
    j["kernel"] = {{"a", std::vector<double>(kernel.amplitudes().begin(), kernel.amplitudes().end())},
                   {"b", std::vector<double>(kernel.rates().begin(), kernel.rates().end())}};
    if (generated_terms)
        j["generated_terms"] = generated_terms;
    j["N"] = N;
    j["xi"] = xi;
    json forcing_list = json::array();
    for (const auto& [n, rule] : forcing.modes) {
        json e{{"n", n}};
        if (rule.is_sampled()) {
            e["samples"] = rule.samples();
        } else {
            json terms = json::array();
            for (const auto& t : rule.terms())
                terms.push_back({{"c", t.c},
                                 {"lambda", t.lambda},
                                 {"omega", t.omega},
                                 {"kind", t.shape == Oscillation::sin ? "sin" : "cos"}});
            e["terms"] = terms;
        }
        forcing_list.push_back(e);
    }
    j["forcing"] = forcing_list;
    j["grid"] = {{"t_end", grid.t_end()}, {"step", grid.step()}};
    j["eps"] = eps;
    j["s"] = s;
    j["method"] = method == SolveMethod::ode ? "ode" : "volterra";
    j["forcing_weight"] = forcing_weight;
    return j.dump();
}

std::string Scenario::digest() const
{
    return hex_digest(canonical_json());
}

Scenario parse_scenario(std::string_view text)
{
    json root;
    try {
        root = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::ostringstream os;
        os << "line " << line << ", column " << col << ": " << e.what();
        throw Error(ErrorKind::parse_error, os.str());
    }
    if (!root.is_object())
        schema("<root>", "expected an object");
    only_keys(root, {"kernel", "N", "xi", "forcing", "grid", "eps", "s", "method", "forcing_weight"}, "");

    auto parsed = parse_kernel(require(root, "kernel", ""));
    const int N = integer(require(root, "N", ""), "N");
    if (N < 1)
        throw Error(ErrorKind::config_error, "N must be >= 1");

    const json& g = require(root, "grid", "");
    if (!g.is_object())
        schema("grid", "expected an object");
    only_keys(g, {"t_end", "step"}, "grid");
    const double t_end = number(require(g, "t_end", "grid"), "grid.t_end");
    const double step = number(require(g, "step", "grid"), "grid.step");
    TimeGrid grid = [&] {
        try {
            return TimeGrid::make(t_end, step);
        } catch (const Error& e) {
            throw Error(ErrorKind::config_error, std::string("grid: ") + e.what());
        }
    }();

    std::vector<double> xi = parse_xi(require(root, "xi", ""), N);
    Scenario sc(std::move(parsed.kernel), N, std::move(xi), grid);
    sc.generated_terms = parsed.terms;
    if (const auto it = root.find("forcing"); it != root.end())
        sc.forcing = parse_forcing(*it);
    sc.eps = number_or(root, "eps", 1.0, "");
    sc.s = number_or(root, "s", 0.0, "");
    sc.forcing_weight = number_or(root, "forcing_weight", 0.0, "");
    if (const auto it = root.find("method"); it != root.end()) {
        if (!it->is_string())
            schema("method", "expected \"ode\" or \"volterra\"");
        const auto m = it->get<std::string>();
        if (m == "ode")
            sc.method = SolveMethod::ode;
        else if (m == "volterra")
            sc.method = SolveMethod::volterra;
        else
            schema("method", "expected \"ode\" or \"volterra\", got \"" + m + "\"");
    }
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::config_error, "cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex_digest(std::string_view bytes)
{
    static const char digits[] = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace memoheat
