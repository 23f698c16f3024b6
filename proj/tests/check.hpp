#pragma once

// Minimal PASS/FAIL checks shared by the unit tests.

#include <cmath>
#include <iostream>
#include <string>

namespace check {

inline int passed = 0;
inline int failed = 0;

inline void record(bool ok, const std::string& msg, const char* file, int line) {
    if (ok) {
        std::cout << "[PASS] " << msg << "\n";
        ++passed;
    } else {
        std::cout << "[FAIL] " << msg << "  (" << file << ":" << line << ")\n";
        ++failed;
    }
}

inline bool near_rel(double a, double b, double rel) {
    if (b == 0.0) return std::fabs(a) <= rel;
    return std::fabs(a - b) <= rel * std::fabs(b);
}

inline bool near_abs(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline int summary(const char* suite) {
    std::cout << "\n" << suite << ": " << passed << " passed, " << failed << " failed\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace check

#define CHECK(cond, msg) ::check::record(static_cast<bool>(cond), (msg), __FILE__, __LINE__)

#define CHECK_THROWS(expr, Exc, msg)                         \
    do {                                                     \
        bool thrown_ = false;                                \
        try {                                                \
            (void)(expr);                                    \
        } catch (const Exc&) {                               \
            thrown_ = true;                                  \
        } catch (...) {                                      \
        }                                                    \
        ::check::record(thrown_, (msg), __FILE__, __LINE__); \
    } while (0)

#define CHECK_NOTHROW(expr, msg)                             \
    do {                                                     \
        bool ok_ = true;                                     \
        try {                                                \
            (void)(expr);                                    \
        } catch (const std::exception& e_) {                 \
            ok_ = false;                                     \
            std::cout << "  exception: " << e_.what() << "\n"; \
        }                                                    \
        ::check::record(ok_, (msg), __FILE__, __LINE__);     \
    } while (0)
