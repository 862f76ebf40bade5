#pragma once

// Minimal JSON document builder with deterministic serialization: object
// members keep insertion order and every double is printed with %.17g, so
// identical runs produce byte-identical output.

#include <cmath>
#include <cstdio>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace jout {

class Value {
  public:
    enum class Kind { Null, Bool, Int, Double, String, Array, Object };

    Value() : kind_(Kind::Null) {}
    Value(bool b) : kind_(Kind::Bool), bool_(b) {}
    template <typename T, std::enable_if_t<std::is_integral_v<T> && !std::is_same_v<T, bool>, int> = 0>
    Value(T i) : kind_(Kind::Int), int_(static_cast<long long>(i)) {}
    Value(double d) : kind_(Kind::Double), double_(d) {}
    Value(const char* s) : kind_(Kind::String), string_(s) {}
    Value(std::string s) : kind_(Kind::String), string_(std::move(s)) {}

    static Value array() {
        Value v;
        v.kind_ = Kind::Array;
        return v;
    }
    static Value object() {
        Value v;
        v.kind_ = Kind::Object;
        return v;
    }

    Value& push(Value v) {
        elements_.push_back(std::move(v));
        return elements_.back();
    }
    Value& set(std::string key, Value v) {
        members_.emplace_back(std::move(key), std::move(v));
        return members_.back().second;
    }

    std::string dump() const {
        std::string out;
        write(out);
        return out;
    }

  private:
    static void write_escaped(const std::string& s, std::string& out) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    void write(std::string& out) const {
        switch (kind_) {
            case Kind::Null: out += "null"; break;
            case Kind::Bool: out += bool_ ? "true" : "false"; break;
            case Kind::Int: out += std::to_string(int_); break;
            case Kind::Double: {
                if (!std::isfinite(double_)) {
                    out += "null";
                    break;
                }
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", double_);
                out += buf;
                break;
            }
            case Kind::String: write_escaped(string_, out); break;
            case Kind::Array: {
                out += '[';
                for (std::size_t i = 0; i < elements_.size(); ++i) {
                    if (i) out += ',';
                    elements_[i].write(out);
                }
                out += ']';
                break;
            }
            case Kind::Object: {
                out += '{';
                for (std::size_t i = 0; i < members_.size(); ++i) {
                    if (i) out += ',';
                    write_escaped(members_[i].first, out);
                    out += ':';
                    members_[i].second.write(out);
                }
                out += '}';
                break;
            }
        }
    }

    Kind kind_;
    bool bool_ = false;
    long long int_ = 0;
    double double_ = 0.0;
    std::string string_;
    std::vector<Value> elements_;
    std::vector<std::pair<std::string, Value>> members_;
};

}  // namespace jout
