#include "nhlat/io.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nhlat {

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(cdouble z)
{
    std::string out = format_double(z.real());
    out += z.imag() < 0.0 ? "-" : "+";
    out += format_double(std::abs(z.imag()));
    out += "i";
    return out;
}

cdouble parse_complex(const std::string& s)
{
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    if (t.empty())
        throw std::invalid_argument("empty complex literal");

    const bool has_i = t.back() == 'i' || t.back() == 'j';
    if (!has_i) {
        size_t pos = 0;
        const double re = std::stod(t, &pos);
        if (pos != t.size())
            throw std::invalid_argument("bad complex literal: " + s);
        return {re, 0.0};
    }
    t.pop_back(); // strip the i

    // split at the last +/- that is not an exponent sign and not leading
    size_t split = std::string::npos;
    for (size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    try {
        if (split == std::string::npos) {
            // pure imaginary: "i", "-i", "2i", "-3.5i"
            if (t.empty() || t == "+" || t == "-")
                t += "1";
            size_t pos = 0;
            const double im = std::stod(t, &pos);
            if (pos != t.size())
                throw std::invalid_argument("");
            return {0.0, im};
        }
        size_t pos = 0;
        const double re = std::stod(t.substr(0, split), &pos);
        if (pos != split)
            throw std::invalid_argument("");
        std::string imag_part = t.substr(split);
        if (imag_part == "+" || imag_part == "-")
            imag_part += "1";
        const double im = std::stod(imag_part, &pos);
        if (pos != imag_part.size())
            throw std::invalid_argument("");
        return {re, im};
    } catch (const std::exception&) {
        throw std::invalid_argument("bad complex literal: " + s +
                                    " (expected a+bi form)");
    }
}

namespace {

std::string trim(const std::string& s)
{
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void flatten_json(const nlohmann::json& j, const std::string& prefix,
                  std::map<std::string, std::string>& out)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_json(it.value(), it.key(), out);
        return;
    }
    if (j.is_string())
        out[prefix] = j.get<std::string>();
    else if (j.is_number_integer())
        out[prefix] = std::to_string(j.get<long long>());
    else if (j.is_number())
        out[prefix] = format_double(j.get<double>());
    else if (j.is_boolean())
        out[prefix] = j.get<bool>() ? "true" : "false";
    // arrays and nulls are skipped; manifests keep scalars at param level
}

} // namespace

std::map<std::string, std::string> read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::map<std::string, std::string> out;
    const size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const nlohmann::json j = nlohmann::json::parse(text);
        flatten_json(j, "", out);
        return out;
    }

    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not 'key = value': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " has an empty key");
        out[key] = value;
    }
    return out;
}

void write_csv(const std::string& path, const CsvTable& table)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    for (const std::string& c : table.comments)
        out << "# " << c << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
        out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
}

void write_json_table(const std::string& path, const CsvTable& table)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (size_t i = 0; i < row.size() && i < table.columns.size(); ++i)
            obj[table.columns[i]] = row[i];
        rows.push_back(obj);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << rows.dump(2) << "\n";
}

void write_text(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string param_comment(const LatticeParams& p)
{
    return "n=" + std::to_string(p.n) + " gamma=" + format_double(p.gamma) +
           " delta=" + format_double(p.delta) + " v=" + format_double(p.v);
}

} // namespace nhlat
