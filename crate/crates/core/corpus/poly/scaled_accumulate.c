void f(int n, int x) {
    int s;
    int t;
    s = 0;
    for (int i = 0; i < n; i++) {
        t = x * n;
        s = s + t;
    }
}
