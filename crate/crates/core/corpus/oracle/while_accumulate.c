void f(int n, int s, int t) {
    while (n > 0) {
        s = s + t;
        t = t + 1;
        n = n - 1;
    }
    s = s + n;
}
