#pragma once

#include <coroutine>
#include <exception>
#include <memory>
#include <stdexcept>
#include <utility>
#include <variant>

#include "vdb/oracle.hpp"

namespace vdb {

// Lazy coroutine task with symmetric transfer. Sampling algorithms are
// written as Task coroutines that pull rewards through an ExecScope; the same
// coroutine body then runs either to completion in one resume (direct mode)
// or one oracle draw at a time (stepped mode).
template <typename T>
class [[nodiscard]] Task {
public:
    struct promise_type {
        std::variant<std::monostate, T, std::exception_ptr> result;
        std::coroutine_handle<> continuation;

        Task get_return_object() {
            return Task(std::coroutine_handle<promise_type>::from_promise(*this));
        }
        std::suspend_always initial_suspend() noexcept { return {}; }

        struct FinalAwaiter {
            bool await_ready() noexcept { return false; }
            std::coroutine_handle<> await_suspend(std::coroutine_handle<promise_type> h) noexcept {
                auto cont = h.promise().continuation;
                return cont ? cont : std::noop_coroutine();
            }
            void await_resume() noexcept {}
        };
        FinalAwaiter final_suspend() noexcept { return {}; }

        void return_value(T v) { result.template emplace<1>(std::move(v)); }
        void unhandled_exception() { result.template emplace<2>(std::current_exception()); }

        T take() {
            if (result.index() == 2) std::rethrow_exception(std::get<2>(result));
            return std::move(std::get<1>(result));
        }
    };

    Task(Task&& other) noexcept : handle_(std::exchange(other.handle_, nullptr)) {}
    Task(const Task&) = delete;
    Task& operator=(const Task&) = delete;
    Task& operator=(Task&& other) noexcept {
        if (this != &other) {
            destroy();
            handle_ = std::exchange(other.handle_, nullptr);
        }
        return *this;
    }
    ~Task() { destroy(); }

    auto operator co_await() noexcept {
        struct Awaiter {
            std::coroutine_handle<promise_type> h;
            bool await_ready() noexcept { return false; }
            std::coroutine_handle<> await_suspend(std::coroutine_handle<> parent) noexcept {
                h.promise().continuation = parent;
                return h;
            }
            T await_resume() { return h.promise().take(); }
        };
        return Awaiter{handle_};
    }

    std::coroutine_handle<promise_type> handle() const { return handle_; }

private:
    explicit Task(std::coroutine_handle<promise_type> h) : handle_(h) {}
    void destroy() {
        if (handle_) {
            handle_.destroy();
            handle_ = nullptr;
        }
    }

    std::coroutine_handle<promise_type> handle_{};
};

// Draw gateway bound to one oracle. In direct mode the awaiter fulfills each
// request inline; in stepped mode it suspends the whole coroutine stack and
// the driver feeds exactly one draw per step. Both modes consume the oracle's
// reward stream identically.
class ExecScope {
public:
    explicit ExecScope(SamplingOracle& oracle, bool stepped = false)
        : oracle_(&oracle), stepped_(stepped) {}

    ExecScope(const ExecScope&) = delete;
    ExecScope& operator=(const ExecScope&) = delete;

    SamplingOracle& oracle() { return *oracle_; }
    const SamplingOracle& oracle() const { return *oracle_; }
    bool stepped() const { return stepped_; }

    struct DrawAwaiter {
        ExecScope& scope;
        int arm;

        bool await_ready() {
            if (scope.stepped_) return false;
            scope.delivered_ = scope.oracle_->draw(arm);
            return true;
        }
        void await_suspend(std::coroutine_handle<> h) {
            scope.waiter_ = h;
            scope.pending_arm_ = arm;
            scope.has_pending_ = true;
        }
        double await_resume() {
            if (scope.error_) {
                std::exception_ptr e = std::exchange(scope.error_, nullptr);
                std::rethrow_exception(e);
            }
            return scope.delivered_;
        }
    };

    DrawAwaiter draw(int arm) { return DrawAwaiter{*this, arm}; }

    bool has_pending() const { return has_pending_; }
    int pending_arm() const { return pending_arm_; }

    // Fulfills the pending request with one oracle draw (or delivers the
    // budget error into the suspended coroutine) and resumes it.
    void feed_pending() {
        if (!has_pending_) {
            throw std::logic_error("ExecScope: no pending draw to feed");
        }
        has_pending_ = false;
        try {
            delivered_ = oracle_->draw(pending_arm_);
        } catch (...) {
            error_ = std::current_exception();
        }
        auto h = std::exchange(waiter_, nullptr);
        h.resume();
    }

private:
    SamplingOracle* oracle_;
    bool stepped_;
    bool has_pending_ = false;
    int pending_arm_ = -1;
    double delivered_ = 0.0;
    std::exception_ptr error_{};
    std::coroutine_handle<> waiter_{};
};

// Runs a task to completion in direct mode (one resume; draws are fulfiled
// inline by the scope).
template <typename T>
T run_task(Task<T> task) {
    task.handle().resume();
    if (!task.handle().done()) {
        throw std::logic_error("run_task: direct-mode task suspended unexpectedly");
    }
    return task.handle().promise().take();
}

enum class RunStatus { needs_sample, finished };

// A suspended execution of one sampling algorithm bound to its own oracle.
// Construction advances the coroutine to its first draw request (drawing
// nothing); each step() consumes exactly one oracle draw and advances to the
// next request or to completion.
template <typename T>
class SteppableRun {
public:
    template <typename MakeTask>
    SteppableRun(std::unique_ptr<SamplingOracle> oracle, MakeTask&& make)
        : oracle_(std::move(oracle)),
          scope_(std::make_unique<ExecScope>(*oracle_, /*stepped=*/true)),
          task_(make(*scope_)) {
        task_.handle().resume();
    }

    RunStatus status() const {
        return task_.handle().done() ? RunStatus::finished : RunStatus::needs_sample;
    }

    int pending_arm() const { return scope_->pending_arm(); }

    void step() {
        if (status() == RunStatus::finished) {
            throw std::logic_error("SteppableRun: step on a finished run");
        }
        scope_->feed_pending();
    }

    // Valid once finished; rethrows whatever the algorithm left uncaught.
    T result() { return task_.handle().promise().take(); }

    SamplingOracle& oracle() { return *oracle_; }
    const SamplingOracle& oracle() const { return *oracle_; }

private:
    std::unique_ptr<SamplingOracle> oracle_;
    std::unique_ptr<ExecScope> scope_;
    Task<T> task_;
};

}  // namespace vdb
