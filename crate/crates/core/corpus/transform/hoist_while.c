void f(int n, int c, int s) {
    int i;
    int t;
    i = 0;
    t = 0;
    while (i < n) {
        t = c + 1;
        s = s + t;
        i = i + 1;
    }
}
