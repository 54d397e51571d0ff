#pragma once

// A structural validator for the subset of JSON Schema the shipped schemas
// use: type, properties, required, additionalProperties, items, enum, $ref
// (sibling files and #/definitions pointers).

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

namespace schemacheck {

using nlohmann::json;

class Validator {
public:
    explicit Validator(const std::filesystem::path& schema_dir) : dir_(schema_dir) {}

    // Returns an empty string when the document conforms, else the first error.
    std::string validate(const json& doc, const std::string& schema_file) {
        const json& schema = load(schema_file);
        return check(doc, schema, schema_file, "$");
    }

private:
    const json& load(const std::string& name) {
        auto it = cache_.find(name);
        if (it != cache_.end()) return it->second;
        std::ifstream in(dir_ / name);
        if (!in) throw std::runtime_error("missing schema " + name);
        json schema;
        in >> schema;
        return cache_.emplace(name, std::move(schema)).first->second;
    }

    const json* resolve_pointer(const json& root, const std::string& pointer) {
        const json* node = &root;
        std::size_t pos = 2;  // skip "#/"
        while (pos < pointer.size()) {
            const auto next = pointer.find('/', pos);
            const auto key = pointer.substr(pos, next == std::string::npos ? next : next - pos);
            if (!node->is_object() || !node->contains(key)) return nullptr;
            node = &node->at(key);
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        return node;
    }

    std::string check(const json& doc, const json& schema, const std::string& file,
                      const std::string& where) {
        if (schema.contains("$ref")) {
            const std::string ref = schema.at("$ref").get<std::string>();
            const auto hash = ref.find('#');
            std::string target_file = hash == std::string::npos ? ref : ref.substr(0, hash);
            if (target_file.empty()) target_file = file;
            const json& root = load(target_file);
            const json* target = &root;
            if (hash != std::string::npos && hash + 1 < ref.size()) {
                target = resolve_pointer(root, ref.substr(hash));
                if (!target) return where + ": unresolvable $ref " + ref;
            }
            return check(doc, *target, target_file, where);
        }

        if (schema.contains("enum")) {
            for (const auto& allowed : schema.at("enum"))
                if (doc == allowed) return {};
            return where + ": value not in enum";
        }

        if (schema.contains("type")) {
            const auto matches = [&](const std::string& t) {
                if (t == "object") return doc.is_object();
                if (t == "array") return doc.is_array();
                if (t == "string") return doc.is_string();
                if (t == "integer") return doc.is_number_integer();
                if (t == "number") return doc.is_number();
                if (t == "boolean") return doc.is_boolean();
                if (t == "null") return doc.is_null();
                return false;
            };
            bool ok = false;
            if (schema.at("type").is_array()) {
                for (const auto& t : schema.at("type")) ok = ok || matches(t.get<std::string>());
            } else {
                ok = matches(schema.at("type").get<std::string>());
            }
            if (!ok) return where + ": unexpected type";
        }

        if (doc.is_object()) {
            if (schema.contains("required"))
                for (const auto& key : schema.at("required"))
                    if (!doc.contains(key.get<std::string>()))
                        return where + ": missing required key " + key.get<std::string>();
            const json* props =
                schema.contains("properties") ? &schema.at("properties") : nullptr;
            for (const auto& [key, value] : doc.items()) {
                if (props && props->contains(key)) {
                    const auto err = check(value, props->at(key), file, where + "." + key);
                    if (!err.empty()) return err;
                } else if (schema.contains("additionalProperties")) {
                    const auto& extra = schema.at("additionalProperties");
                    if (extra.is_boolean() && !extra.get<bool>())
                        return where + ": unexpected key " + key;
                    if (extra.is_object()) {
                        const auto err = check(value, extra, file, where + "." + key);
                        if (!err.empty()) return err;
                    }
                }
            }
        }

        if (doc.is_array() && schema.contains("items")) {
            for (std::size_t i = 0; i < doc.size(); ++i) {
                const auto err = check(doc.at(i), schema.at("items"), file,
                                       where + "[" + std::to_string(i) + "]");
                if (!err.empty()) return err;
            }
        }
        return {};
    }

    std::filesystem::path dir_;
    std::map<std::string, json> cache_;
};

}  // namespace schemacheck
