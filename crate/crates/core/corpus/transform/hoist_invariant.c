void f(int n, int c, int x) {
    int t;
    t = 0;
    for (int i = 0; i < n; i++) {
        t = c * c;
        x = x + t;
    }
}
