#include "dynprim/report.hpp"

#include <string>

#include "dynprim/errors.hpp"

namespace dynprim {

namespace {

using ojson = nlohmann::ordered_json;

bool is_scalar(const ojson& j) { return !j.is_object() && !j.is_array(); }

bool all_scalars(const ojson& arr) {
    for (const auto& e : arr)
        if (!is_scalar(e)) return false;
    return true;
}

std::string scalar_to_text(const ojson& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

void render(std::string& out, const ojson& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (is_scalar(value)) {
                out += pad + key + ": " + scalar_to_text(value) + "\n";
            } else if (value.is_array() && all_scalars(value)) {
                out += pad + key + ": [";
                bool first = true;
                for (const auto& e : value) {
                    if (!first) out += ", ";
                    out += scalar_to_text(e);
                    first = false;
                }
                out += "]\n";
            } else {
                out += pad + key + ":\n";
                render(out, value, indent + 2);
            }
        }
        return;
    }
    if (j.is_array()) {
        for (const auto& e : j) {
            if (is_scalar(e)) {
                out += pad + "- " + scalar_to_text(e) + "\n";
            } else {
                out += pad + "-\n";
                render(out, e, indent + 2);
            }
        }
        return;
    }
    out += pad + scalar_to_text(j) + "\n";
}

}  // namespace

std::string report_to_json(const Report& r) {
    ojson j;
    j["tool"] = kToolName;
    j["schema"] = r.schema;
    j["subcommand"] = r.subcommand;
    j["input"] = r.input;
    j["result"] = r.result;
    j["elapsed_seconds"] = r.elapsed_seconds;
    return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
    ojson j = ojson::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw InputError("malformed report JSON");
    for (const char* key : {"tool", "schema", "subcommand", "input", "result", "elapsed_seconds"}) {
        if (!j.contains(key)) throw InputError(std::string("report JSON is missing the '") + key + "' field");
    }
    if (j["tool"] != kToolName) throw InputError("report JSON was not produced by " + std::string(kToolName));
    Report r;
    r.schema = j["schema"].get<std::string>();
    r.subcommand = j["subcommand"].get<std::string>();
    r.input = j["input"];
    r.result = j["result"];
    r.elapsed_seconds = j["elapsed_seconds"].get<double>();
    return r;
}

std::string report_to_text(const Report& r) {
    std::string out;
    out += std::string(kToolName) + " " + r.subcommand + " (schema " + r.schema + ")\n";
    out += "input:\n";
    render(out, r.input, 2);
    out += "result:\n";
    render(out, r.result, 2);
    out += "elapsed_seconds: " + ojson(r.elapsed_seconds).dump() + "\n";
    return out;
}

}  // namespace dynprim
