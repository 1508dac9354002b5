void f(int n, int x) {
    while (n > 0) {
        n = n - 1;
        x = x * x;
    }
}
