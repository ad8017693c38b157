#pragma once

#include "lmlearn/lgg.hpp"
#include "lmlearn/metrics.hpp"
#include "lmlearn/plgg.hpp"
#include "lmlearn/plog.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace lmlearn {

using Json = nlohmann::ordered_json;

// A JSON document that does not match the expected layout. pointer() is a JSON
// pointer to the offending value.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string pointer, const std::string &message)
        : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
    const std::string &pointer() const { return pointer_; }

private:
    std::string pointer_;
};

Json atom_to_json(const Atom &atom);
Atom atom_from_json(const Json &j, const std::string &pointer);

Json lgg_to_json(const Lgg &lgg);
Lgg lgg_from_json(const Json &j);

Json plog_to_json(const PLog &plog);
// Recomputes every mu from the counts and rejects stored values that disagree.
PLog plog_from_json(const Json &j);

Json plgg_to_json(const PLgg &plgg);
PLgg plgg_from_json(const Json &j);

Json report_to_json(const MetricReport &report);

std::string lgg_to_dot(const Lgg &lgg);
std::string plog_to_dot(const PLog &plog);
std::string plgg_to_dot(const PLgg &plgg);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);
// Throws std::runtime_error (with the path) on I/O or JSON syntax errors.
Json read_json_file(const std::filesystem::path &path);

} // namespace lmlearn
